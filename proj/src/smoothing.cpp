#include <qdiv/smoothing.hpp>

#include <algorithm>
#include <numeric>

namespace qdiv {

bool EpsilonBall::contains(const Matrix& candidate) const {
  if (candidate.rows() != center.dim() || candidate.cols() != center.dim()) return false;
  if (min_eigenvalue(candidate) < -1e-10) return false;
  if (real_trace(candidate) > center.trace() + 1e-10) return false;
  return trace_norm_hermitian(Matrix(candidate - center.matrix())) <= epsilon + 1e-9;
}

namespace {

// Diagonal weights of a commuting pair in a shared eigenbasis, used to run
// the spectral constructions on eigenvalue lists instead of dense matrices.
struct Frame {
  std::optional<JointDiagonal<double>> joint;

  Frame(const Matrix& rho, const Matrix& sigma) : joint(joint_diagonalize(rho, sigma)) {}
  bool classical() const { return joint.has_value(); }

  Matrix lift(const RealVector& diag) const {
    const Matrix d = diag.cast<Complex>().asDiagonal();
    if (joint->basis.isIdentity(0.0)) return d;
    return joint->basis * d * joint->basis.adjoint();
  }
};

double projector_cutoff(const RealVector& diff) {
  return tol::projector_zero * std::max(1.0, diff.cwiseAbs().maxCoeff());
}

double tail_mass_classical(const RealVector& p, const RealVector& q, double t) {
  const RealVector diff = p - t * q;
  const double zero = projector_cutoff(diff);
  double mass = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (diff(i) > zero) mass += p(i);
  return mass;
}

double tail_mass_dense(const Matrix& rho, const Matrix& sigma, double t) {
  const Matrix pr = sign_projector(Matrix(rho - t * sigma), Relation::Greater);
  return trace_product(pr, rho);
}

// Largest eigenvalue of rho divided by the smallest nonzero eigenvalue of
// sigma: every lambda above log2 of this sees only the part of rho outside
// supp sigma in {rho > 2^lambda sigma}.
double ratio_ceiling_bits(const Matrix& rho, const Matrix& sigma) {
  const RealVector s = eigenvalues_descending(sigma);
  const double cutoff = tol::support_relative * std::max(s(0), 0.0);
  double smallest = s(0);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0.0) smallest = s(i);
  return std::log2(std::max(max_eigenvalue(rho), 1e-300) / smallest);
}

}  // namespace

double tail_epsilon(const Matrix& rho, const Matrix& sigma, double lambda_bits) {
  require_same_dim(rho.rows(), sigma.rows(), "tail_epsilon");
  const Frame f(rho, sigma);
  const double t = std::exp2(lambda_bits);
  const double mass = f.classical() ? tail_mass_classical(f.joint->a, f.joint->b, t)
                                    : tail_mass_dense(rho, sigma, t);
  return std::sqrt(8.0 * std::max(mass, 0.0));
}

SmoothingCertificate smoothing_certificate(const DensityOperator& rho, const DensityOperator& sigma, double lambda_bits) {
  require_same_dim(rho.dim(), sigma.dim(), "smoothing_certificate");
  if (!std::isfinite(lambda_bits)) throw ValidationError("smoothing_certificate: lambda must be finite");
  const double t = std::exp2(lambda_bits);
  const Frame f(rho.matrix(), sigma.matrix());

  Matrix delta, transform, smoothed;
  double achieved_bits = 0.0;  // d_max(smoothed, sigma)
  if (f.classical()) {
    const RealVector& p = f.joint->a;
    const RealVector& q = f.joint->b;
    const RealVector alpha = t * q.cwiseMax(0.0);
    const RealVector d = (p - alpha).cwiseMax(0.0);
    const RealVector beta = alpha + d;
    const double cutoff = tol::support_relative * std::max(beta.maxCoeff(), 0.0);
    RealVector tr(p.size()), out(p.size());
    achieved_bits = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      tr(i) = beta(i) > cutoff ? std::sqrt(alpha(i) / beta(i)) : 0.0;
      out(i) = tr(i) * tr(i) * std::max(p(i), 0.0);
      if (out(i) > 0.0) {
        achieved_bits = q(i) > 0.0 ? std::max(achieved_bits, std::log2(out(i) / q(i)))
                                   : std::numeric_limits<double>::infinity();
      }
    }
    delta = f.lift(d);
    transform = f.lift(tr);
    smoothed = f.lift(out);
  } else {
    const Matrix alpha = t * sigma.matrix();
    delta = positive_part(Matrix(rho.matrix() - alpha));
    const Matrix beta = alpha + delta;
    transform = psd_sqrt(alpha) * support_power(beta, -0.5);
    smoothed = hermitian_part(transform * rho.matrix() * transform.adjoint());
    const DivergenceValue v = d_max_matrix(smoothed, sigma.matrix());
    achieved_bits = v.finite ? v.bits : std::numeric_limits<double>::infinity();
  }

  if (!(real_trace(smoothed) > 0.0)) {
    throw ValidationError("smoothing_certificate: the smoothed operator vanishes at this lambda");
  }
  SmoothingCertificate c{lambda_bits,
                         std::sqrt(8.0 * std::max(real_trace(delta), 0.0)),
                         delta,
                         transform,
                         DensityOperator::trusted(smoothed),
                         0.0};
  c.transform_trace_dist = trace_norm_hermitian(Matrix(smoothed - rho.matrix()));

  if (!(achieved_bits <= lambda_bits + 1e-7)) {
    throw ConsistencyError("smoothing_certificate: d_max(smoothed, sigma) = " + std::to_string(achieved_bits) +
                           " exceeds lambda = " + std::to_string(lambda_bits));
  }
  if (!(c.transform_trace_dist <= c.epsilon_used + 1e-7)) {
    throw ConsistencyError("smoothing_certificate: ||smoothed - rho||_1 = " + std::to_string(c.transform_trace_dist) +
                           " exceeds sqrt(8 Tr Delta) = " + std::to_string(c.epsilon_used));
  }
  if (!EpsilonBall{rho, c.epsilon_used}.contains(smoothed)) {
    throw ConsistencyError("smoothing_certificate: smoothed operator lies outside the ball it certifies");
  }
  return c;
}

SmoothDmaxUpper smooth_dmax_upper(const DensityOperator& rho, const DensityOperator& sigma, double eps) {
  require_same_dim(rho.dim(), sigma.dim(), "smooth_dmax_upper");
  if (!(eps > 0.0)) throw ValidationError("smooth_dmax_upper: eps must be positive");
  const Frame f(rho.matrix(), sigma.matrix());
  auto tail = [&](double bits) {
    const double t = std::exp2(bits);
    const double mass = f.classical() ? tail_mass_classical(f.joint->a, f.joint->b, t)
                                      : tail_mass_dense(rho.matrix(), sigma.matrix(), t);
    return std::sqrt(8.0 * std::max(mass, 0.0));
  };

  SmoothDmaxUpper r;
  const DivergenceValue dmax = d_max_matrix(rho.matrix(), sigma.matrix());
  double hi = dmax.finite ? dmax.bits : ratio_ceiling_bits(rho.matrix(), sigma.matrix()) + 60.0;
  if (!dmax.finite && tail(hi) > eps) {
    r.value_bits = std::numeric_limits<double>::infinity();
    r.tail_epsilon = tail(hi);
    return r;
  }
  double lo = hi - 60.0;
  if (tail(lo) <= eps) {
    r.floor_hit = true;
    hi = lo;
  } else {
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      (tail(mid) <= eps ? hi : lo) = mid;
    }
  }
  r.value_bits = hi;
  r.tail_epsilon = tail(hi);
  r.certificate = smoothing_certificate(rho, sigma, hi);
  return r;
}

// ---------------------------------------------------------------------------
// Exact smooth max-relative entropy.

namespace {

double soft(double x, double tau) {
  return x > tau ? x - tau : (x < -tau ? x + tau : 0.0);
}

// Splitting solver for  min ||X - rho||_1  s.t.  X >= 0, X <= t sigma,
// Tr X <= Tr rho,  written as three blocks sharing a consensus variable z.
// State persists across calls so that consecutive bisection steps start from
// the previous solution.
class BallDistanceSolver {
 public:
  BallDistanceSolver(const Matrix& rho, const Matrix& sigma, const ExactSolverOptions& options)
      : rho_(rho), sigma_(sigma), options_(options), n_(rho.rows()) {
    const auto s = eig_hermitian(sigma);
    const double cutoff = tol::support_relative * std::max(s.values(0), 0.0);
    Eigen::Index r = 0;
    while (r < s.dim() && s.values(r) > cutoff) ++r;
    sigma_vectors_ = s.vectors.leftCols(r);
    sigma_sqrt_ = s.values.head(r).cwiseSqrt();
    sigma_half_ = sigma_vectors_ * sigma_sqrt_.cast<Complex>().asDiagonal() * sigma_vectors_.adjoint();
    cap_ = real_trace(rho);
    z_ = rho;
    for (auto& u : u_) u = Matrix::Zero(n_, n_);
  }

  struct Decision {
    bool feasible = false;
    Matrix candidate;  // set when feasible
    double dual_bound = 0.0;
  };

  Decision decide(double t, double eps) {
    Decision d;
    const Matrix ts = t * sigma_;
    Matrix y = Matrix::Zero(n_, n_);
    double primal = 0.0, dual = 0.0;
    for (long it = 1; it <= options_.iteration_cap; ++it) {
      ++iterations_;
      // Block 1: ||X - rho||_1 with the trace cap Tr X <= Tr rho.
      const Matrix v1 = z_ - u_[0];
      const auto e = eig_hermitian(Matrix(v1 - rho_));
      const double tau = 1.0 / step_;
      auto shifted_sum = [&](double s) {
        double total = 0.0;
        for (Eigen::Index k = 0; k < n_; ++k) total += soft(e.values(k) - s, tau);
        return total;
      };
      double shift = 0.0;
      if (shifted_sum(0.0) > 0.0) {
        double lo = 0.0, hi = e.values(0) + tau;
        for (int b = 0; b < 100; ++b) {
          const double mid = 0.5 * (lo + hi);
          (shifted_sum(mid) > 0.0 ? lo : hi) = mid;
        }
        shift = hi;
      }
      RealVector dv(n_), yv(n_);
      for (Eigen::Index k = 0; k < n_; ++k) {
        dv(k) = soft(e.values(k) - shift, tau);
        yv(k) = -std::clamp(step_ * (e.values(k) - shift), -1.0, 1.0);
      }
      x_[0] = rho_ + e.vectors * dv.cast<Complex>().asDiagonal() * e.vectors.adjoint();
      y = e.vectors * yv.cast<Complex>().asDiagonal() * e.vectors.adjoint();
      // Block 2: X >= 0.
      x_[1] = positive_part(Matrix(z_ - u_[1]));
      // Block 3: X <= t sigma.
      x_[2] = ts - positive_part(Matrix(ts - (z_ - u_[2])));

      const Matrix z_old = z_;
      z_ = hermitian_part(Matrix((x_[0] + u_[0] + x_[1] + u_[1] + x_[2] + u_[2]) / 3.0));
      primal = 0.0;
      for (int i = 0; i < 3; ++i) {
        u_[i] += x_[i] - z_;
        primal += (x_[i] - z_).squaredNorm();
      }
      primal = std::sqrt(primal);
      dual = step_ * std::sqrt(3.0) * (z_ - z_old).norm();
      const bool converged = primal <= options_.residual_tolerance && dual <= options_.residual_tolerance;

      if (converged || it % 20 == 0) {
        Matrix cand = repair(z_, t);
        if (trace_norm_hermitian(Matrix(cand - rho_)) <= eps + 1e-12) {
          d.feasible = true;
          d.candidate = std::move(cand);
          return d;
        }
        d.dual_bound = dual_bound(y, t);
        if (d.dual_bound > eps || converged) return d;
      }
      if (it % 10 == 0) rebalance(primal, dual);
    }
    if (primal <= 1e-5 && dual <= 1e-5) return d;
    throw SolverError("smooth_dmax_exact: iteration cap reached", primal, dual);
  }

  long iterations() const { return iterations_; }

 private:
  // Projects onto {0 <= X <= t sigma} in the sigma-whitened frame, then
  // scales to the trace cap. The result satisfies every constraint exactly.
  Matrix repair(const Matrix& x, double t) const {
    const RealVector inv = sigma_sqrt_.cwiseInverse();
    const Matrix w = inv.cast<Complex>().asDiagonal() * (sigma_vectors_.adjoint() * x * sigma_vectors_) *
                     inv.cast<Complex>().asDiagonal();
    const Matrix clipped = eig_hermitian(w).apply([t](double v) { return std::clamp(v, 0.0, t); });
    const Matrix half = sigma_vectors_ * sigma_sqrt_.cast<Complex>().asDiagonal();
    Matrix out = hermitian_part(Matrix(half * clipped * half.adjoint()));
    const double tr = real_trace(out);
    if (tr > cap_) out *= cap_ / tr;
    return out;
  }

  // For any Y with ||Y||_inf <= 1 and mu >= 0,
  //   ||X - rho||_1 >= Tr(Y rho) - mu Tr rho - t Tr(sigma^{1/2} (Y - mu) sigma^{1/2})_+
  // over the feasible X, so the right side maximized over mu bounds the
  // optimal distance from below.
  double dual_bound(const Matrix& y, double t) const {
    auto g = [&](double mu) {
      const Matrix shifted = sigma_half_ * (y - mu * Matrix::Identity(n_, n_)) * sigma_half_;
      const RealVector ev = eigenvalues_descending(shifted);
      return mu * cap_ + t * ev.cwiseMax(0.0).sum();
    };
    double lo = 0.0, hi = std::max(0.0, max_eigenvalue(y));
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    double ga = g(a), gb = g(b);
    for (int i = 0; i < 60 && hi - lo > 1e-12; ++i) {
      if (ga < gb) {
        hi = b, b = a, gb = ga, a = hi - gr * (hi - lo), ga = g(a);
      } else {
        lo = a, a = b, ga = gb, b = lo + gr * (hi - lo), gb = g(b);
      }
    }
    const double best = std::min({g(0.0), ga, gb});
    return trace_product(y, rho_) - best;
  }

  void rebalance(double primal, double dual) {
    if (primal > 10.0 * dual) {
      step_ *= 2.0;
      for (auto& u : u_) u /= 2.0;
    } else if (dual > 10.0 * primal) {
      step_ /= 2.0;
      for (auto& u : u_) u *= 2.0;
    }
  }

  const Matrix& rho_;
  const Matrix& sigma_;
  ExactSolverOptions options_;
  Eigen::Index n_;
  Matrix sigma_vectors_;
  RealVector sigma_sqrt_;
  Matrix sigma_half_;
  double cap_ = 1.0;
  double step_ = 1.0;
  Matrix z_;
  Matrix x_[3];
  Matrix u_[3];
  long iterations_ = 0;
};

}  // namespace

SmoothDmaxExact smooth_dmax_exact(const DensityOperator& rho, const DensityOperator& sigma, double eps,
                                  const ExactSolverOptions& options) {
  require_same_dim(rho.dim(), sigma.dim(), "smooth_dmax_exact");
  if (!(eps >= 0.0)) throw ValidationError("smooth_dmax_exact: eps must be nonnegative");
  if (rho.dim() > 16) throw ValidationError("smooth_dmax_exact: dimension above 16 is out of range for the exact solver");
  const DivergenceValue dmax = d_max_matrix(rho.matrix(), sigma.matrix());
  if (!dmax.finite) {
    throw ValidationError("smooth_dmax_exact: supp rho must lie inside supp sigma");
  }

  SmoothDmaxExact r;
  r.value_bits = dmax.bits;
  r.lower_bits = dmax.bits;
  r.witness = rho.matrix();
  if (eps == 0.0) return r;
  if (eps >= rho.trace()) {
    r.value_bits = r.lower_bits = -std::numeric_limits<double>::infinity();
    r.witness = Matrix::Zero(rho.dim(), rho.dim());
    return r;
  }

  // Any rhobar in the ball has Tr rhobar >= Tr rho - eps, and rhobar <= t sigma
  // forces Tr rhobar <= t Tr sigma.
  double lo = std::log2((rho.trace() - eps) / sigma.trace());
  double hi = dmax.bits;
  if (!(lo < hi)) {
    r.lower_bits = hi;
    return r;
  }

  BallDistanceSolver solver(rho.matrix(), sigma.matrix(), options);
  auto at_lo = solver.decide(std::exp2(lo), eps);
  if (at_lo.feasible) {
    r.value_bits = r.lower_bits = lo;
    r.witness = at_lo.candidate;
    r.iterations = solver.iterations();
    return r;
  }
  while (hi - lo > options.bits_resolution) {
    const double mid = 0.5 * (lo + hi);
    auto d = solver.decide(std::exp2(mid), eps);
    if (d.feasible) {
      hi = mid;
      r.witness = std::move(d.candidate);
    } else {
      lo = mid;
    }
  }
  r.value_bits = hi;
  r.lower_bits = lo;
  r.iterations = solver.iterations();
  return r;
}

// ---------------------------------------------------------------------------
// Smooth min-relative entropy, projector sweep.

SmoothDminLower smooth_dmin_lower(const DensityOperator& rho, const DensityOperator& sigma, double eps) {
  require_same_dim(rho.dim(), sigma.dim(), "smooth_dmin_lower");
  if (!(eps > 0.0)) throw ValidationError("smooth_dmin_lower: eps must be positive");
  SmoothDminLower r;
  r.gamma_bits = std::numeric_limits<double>::quiet_NaN();
  const DivergenceValue dmin = d_min_matrix(rho.matrix(), sigma.matrix());
  r.value_bits = dmin.bits;
  if (!dmin.finite) return r;
  const DivergenceValue dmax = d_max_matrix(rho.matrix(), sigma.matrix());
  const double lo = dmin.bits - 2.0;
  const double hi = (dmax.finite ? dmax.bits : ratio_ceiling_bits(rho.matrix(), sigma.matrix())) + 2.0;

  const Frame f(rho.matrix(), sigma.matrix());
  constexpr int grid = 512;
  for (int k = 0; k < grid; ++k) {
    const double gamma = lo + (hi - lo) * k / (grid - 1);
    const double t = std::exp2(gamma);
    double kept = 0.0;      // Tr(P rho)
    double overlap = 0.0;   // Tr(pi_{P rho P} sigma)
    if (f.classical()) {
      const RealVector& p = f.joint->a;
      const RealVector& q = f.joint->b;
      const RealVector diff = p - t * q;
      const double zero = projector_cutoff(diff);
      const double support_cut = tol::support_relative * p.maxCoeff();
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (diff(i) < -zero) continue;
        kept += p(i);
        if (p(i) > support_cut && p(i) > 0.0) overlap += q(i);
      }
    } else {
      const Matrix proj = sign_projector(Matrix(rho.matrix() - t * sigma.matrix()), Relation::GreaterEqual);
      const Matrix compressed = proj * rho.matrix() * proj;
      kept = real_trace(compressed);
      if (kept > 0.0) overlap = trace_product(support_projector_matrix(compressed), sigma.matrix());
    }
    const double delta = 1.0 - kept;
    if (!(kept > 0.0) || 2.0 * std::sqrt(std::max(delta, 0.0)) > eps) continue;
    const double value = overlap > 1e-14 ? std::max(0.0, 0.0 - std::log2(overlap)) : std::numeric_limits<double>::infinity();
    if (!r.admissible_found || value > r.value_bits) {
      r.admissible_found = true;
      r.value_bits = std::max(value, dmin.bits);
      r.gamma_bits = gamma;
      r.delta = delta;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Commuting inputs.

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

void check_weights(const std::vector<double>& p, const std::vector<double>& q, const char* where) {
  if (p.size() != q.size() || p.empty()) {
    throw ValidationError(std::string(where) + ": p and q must be nonempty and of equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw ValidationError(std::string(where) + ": weights must be nonnegative");
    total += p[i];
  }
  if (total > 1.0 + tol::normalized) throw ValidationError(std::string(where) + ": sum of p exceeds 1");
  if (!(total > 0.0)) throw ValidationError(std::string(where) + ": p has no support");
}

}  // namespace

std::vector<ClassicalOutcome> classical_outcomes(const std::vector<double>& p, const std::vector<double>& q) {
  check_weights(p, q, "classical_outcomes");
  std::vector<ClassicalOutcome> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    out.push_back({std::log(p[i]), q[i] > 0.0 ? std::log(q[i]) : -std::numeric_limits<double>::infinity(), 0.0});
  }
  return out;
}

double smooth_dmax_classical(const std::vector<ClassicalOutcome>& outcomes, double eps) {
  if (!(eps >= 0.0)) throw ValidationError("smooth_dmax_classical: eps must be nonnegative");
  constexpr double inf = std::numeric_limits<double>::infinity();
  double outside = 0.0;  // mass on q = 0, which must be removed entirely
  std::vector<const ClassicalOutcome*> inside;
  for (const auto& o : outcomes) {
    if (o.log_q == -inf) {
      outside += std::exp(o.log_multiplicity + o.log_p);
    } else {
      inside.push_back(&o);
    }
  }
  if (outside > eps) return inf;
  std::sort(inside.begin(), inside.end(), [](const ClassicalOutcome* a, const ClassicalOutcome* b) {
    return a->log_p - a->log_q > b->log_p - b->log_q;
  });
  // With t between consecutive ratios r_{k+1} <= t <= r_k the removed mass is
  // outside + P_k - t Q_k for the first k outcomes.
  double mass = 0.0;
  double log_q = -inf;
  for (std::size_t k = 0; k < inside.size(); ++k) {
    mass += std::exp(inside[k]->log_multiplicity + inside[k]->log_p);
    log_q = log_add(log_q, inside[k]->log_multiplicity + inside[k]->log_q);
    const double excess = outside + mass - eps;
    if (!(excess > 0.0)) continue;
    const double log_t = std::log(excess) - log_q;
    const double next = k + 1 < inside.size() ? inside[k + 1]->log_p - inside[k + 1]->log_q : -inf;
    if (log_t >= next) return log_t / std::log(2.0);
  }
  return -inf;
}

double smooth_dmin_classical_greedy(const std::vector<ClassicalOutcome>& outcomes, double eps) {
  if (!(eps >= 0.0)) throw ValidationError("smooth_dmin_classical_greedy: eps must be nonnegative");
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (outcomes.empty()) throw ValidationError("smooth_dmin_classical_greedy: no outcomes");
  std::vector<std::size_t> order(outcomes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return outcomes[a].log_p - outcomes[a].log_q < outcomes[b].log_p - outcomes[b].log_q;
  });

  std::vector<double> remaining(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) remaining[i] = std::exp(outcomes[i].log_multiplicity);
  double budget = eps;
  std::size_t last_touched = order.front();
  for (std::size_t idx : order) {
    const auto& o = outcomes[idx];
    if (o.log_q == -inf) continue;  // deleting it would not lower the overlap
    if (!(budget > 0.0)) break;
    double removed;
    if (o.log_multiplicity + o.log_p <= std::log(budget)) {
      removed = remaining[idx];
    } else {
      removed = std::min(remaining[idx], std::floor(std::exp(std::log(budget) - o.log_p)));
    }
    if (removed <= 0.0) continue;
    budget -= std::exp(std::log(removed) + o.log_p);
    remaining[idx] -= removed;
    last_touched = idx;
  }
  if (std::all_of(remaining.begin(), remaining.end(), [](double m) { return m <= 0.0; })) {
    remaining[last_touched] = 1.0;
  }
  double log_overlap = -inf;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (remaining[i] > 0.0) log_overlap = log_add(log_overlap, std::log(remaining[i]) + outcomes[i].log_q);
  }
  if (log_overlap == -inf) return inf;
  return std::max(0.0, 0.0 - log_overlap / std::log(2.0));  // overlap <= Tr sigma <= 1 up to rounding
}

double smooth_dmax_exact_classical(const std::vector<double>& p, const std::vector<double>& q, double eps) {
  return smooth_dmax_classical(classical_outcomes(p, q), eps);
}

double smooth_dmin_exact_classical(const std::vector<double>& p, const std::vector<double>& q, double eps) {
  check_weights(p, q, "smooth_dmin_exact_classical");
  if (!(eps >= 0.0)) throw ValidationError("smooth_dmin_exact_classical: eps must be nonnegative");
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) support.push_back(i);
  if (support.size() > 20) {
    throw ValidationError("smooth_dmin_exact_classical: support size " + std::to_string(support.size()) +
                          " exceeds the enumeration limit of 20");
  }
  const std::size_t m = support.size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint32_t keep = 1; keep < (std::uint32_t(1) << m); ++keep) {
    double deleted = 0.0, overlap = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (keep & (std::uint32_t(1) << j)) {
        overlap += q[support[j]];
      } else {
        deleted += p[support[j]];
      }
    }
    if (deleted > eps + 1e-12) continue;
    best = std::max(best, overlap > 0.0 ? std::max(0.0, 0.0 - std::log2(overlap)) : std::numeric_limits<double>::infinity());
  }
  return best;
}

}  // namespace qdiv
