// Search over separable states by column generation: the ensemble grows by
// the product vector that best improves the objective, and the weights are
// re-optimized over all current product vectors after each addition.
//
// For D_max the weights solve  min sum_k w_k  s.t.  sum_k w_k x_k x_k^dagger >= rho,
// w >= 0, by a log-barrier Newton method; the barrier dual Y = mu S^{-1}
// prices new product vectors (x improves the bound when <x|Y|x> > 1).
//
// For the relative entropy dF = -(1/ln 2) Tr(G dsigma) with G the Frechet
// derivative of log at sigma applied to rho, and Tr(G sigma) = 1, so x
// improves the objective when <x|G|x> > 1.

#include <qdiv/entanglement.hpp>
#include <qdiv/random.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace qdiv {

namespace {

constexpr double kBarrier = 1e-6;

struct Atom {
  Vector a;
  Vector b;
  Vector x;  // a (x) b
};

Atom make_atom(const Vector& a, const Vector& b) {
  Atom t{a / a.norm(), b / b.norm(), Vector()};
  t.x = kron(t.a, t.b);
  return t;
}

// S(rho || sigma) and the gradient operator G at sigma.
struct Evaluation {
  double value = 0.0;
  Matrix g;
};

class Objective {
 public:
  explicit Objective(const Matrix& rho) : rho_(rho) {
    const RealVector ev = eigenvalues_descending(rho);
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > 1e-300) neg_entropy_ += ev(i) * std::log2(ev(i));
  }

  Evaluation operator()(const Matrix& sigma, bool with_gradient) const {
    const auto s = eig_hermitian(sigma);
    const RealVector values = s.values.cwiseMax(1e-300);
    const RealVector logs = values.array().log().matrix();
    const Matrix rho_in = s.vectors.adjoint() * rho_ * s.vectors;
    double cross = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) cross += rho_in(i, i).real() * logs(i);
    Evaluation e;
    e.value = neg_entropy_ - cross / std::log(2.0);
    if (with_gradient) {
      // Frechet derivative of log at sigma applied to rho, in sigma's eigenbasis.
      Matrix g(values.size(), values.size());
      for (Eigen::Index i = 0; i < values.size(); ++i)
        for (Eigen::Index j = 0; j < values.size(); ++j) {
          const double di = values(i), dj = values(j);
          const double kernel =
              std::abs(di - dj) > 1e-12 * std::max(di, dj) ? (logs(i) - logs(j)) / (di - dj) : 2.0 / (di + dj);
          g(i, j) = rho_in(i, j) * kernel;
        }
      e.g = hermitian_part(Matrix(s.vectors * g * s.vectors.adjoint()));
    }
    return e;
  }

 private:
  const Matrix& rho_;
  double neg_entropy_ = 0.0;
};

// Reduced operator <a| G |a> on B (or <b| G |b> on A).
Matrix contract_a(const Matrix& g, const Vector& a, Dims d) {
  Matrix out = Matrix::Zero(d.b, d.b);
  for (Eigen::Index i = 0; i < d.a; ++i)
    for (Eigen::Index j = 0; j < d.a; ++j) {
      const Complex c = std::conj(a(i)) * a(j);
      if (c == Complex(0.0)) continue;
      out += c * g.block(i * d.b, j * d.b, d.b, d.b);
    }
  return out;
}

Matrix contract_b(const Matrix& g, const Vector& b, Dims d) {
  Matrix out = Matrix::Zero(d.a, d.a);
  for (Eigen::Index k = 0; k < d.b; ++k)
    for (Eigen::Index l = 0; l < d.b; ++l) {
      const Complex c = std::conj(b(k)) * b(l);
      if (c == Complex(0.0)) continue;
      for (Eigen::Index i = 0; i < d.a; ++i)
        for (Eigen::Index j = 0; j < d.a; ++j) out(i, j) += c * g(i * d.b + k, j * d.b + l);
    }
  return out;
}

Vector top_vector(const Matrix& m) { return eig_hermitian(m).vectors.col(0); }

// Best rank-one product approximation a (x) b of a joint vector.
std::pair<Vector, Vector> schmidt_top(const Vector& x, Dims d, int index = 0) {
  Matrix psi(d.a, d.b);
  for (Eigen::Index i = 0; i < d.a; ++i)
    for (Eigen::Index j = 0; j < d.b; ++j) psi(i, j) = x(i * d.b + j);
  Eigen::JacobiSVD<Matrix> svd(psi, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU().col(index), svd.matrixV().col(index).conjugate()};
}

// Local maximum of <a (x) b| G |a (x) b> by alternating eigenvector updates.
Atom best_product(const Matrix& g, Dims d, Vector a, double& value) {
  Vector b;
  double last = -1.0;
  for (int it = 0; it < 200; ++it) {
    b = top_vector(contract_a(g, a, d));
    const auto ga = contract_b(g, b, d);
    a = top_vector(ga);
    value = (a.adjoint() * ga * a)(0, 0).real();
    if (value - last <= 1e-13 * std::max(1.0, std::abs(value))) break;
    last = value;
  }
  return make_atom(a, b);
}

// Local maxima of <a (x) b| G |a (x) b> from starts at the Schmidt vectors of
// G's top eigenvectors and at random vectors, best first.
std::vector<std::pair<double, Atom>> price_products(const Matrix& g, Dims d, Rng& rng, int random_starts) {
  std::vector<Vector> starts;
  const auto eig = eig_hermitian(g);
  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(3, eig.dim()); ++k)
    starts.push_back(schmidt_top(eig.vectors.col(k), d).first);
  for (int r = 0; r < random_starts; ++r) starts.push_back(random_unit_vector(d.a, rng));
  std::vector<std::pair<double, Atom>> out;
  for (const auto& a0 : starts) {
    double v = 0.0;
    Atom cand = best_product(g, d, a0, v);
    out.emplace_back(v, std::move(cand));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  return out;
}

// Weights of a fixed set of product vectors for  min sum w  s.t.
// S(w) = sum_k w_k x_k x_k^dagger - rho > 0, w > 0, along the central path of
//   phi_mu(w) = sum w - mu log det S(w) - mu sum log w.
class DominanceMaster {
 public:
  DominanceMaster(const Matrix& rho, Dims dims) : rho_(rho), dims_(dims) {}

  void add(const Atom& atom, double weight) {
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      if (std::abs(atoms_[k].x.dot(atom.x)) > 1.0 - 1e-12) {
        w_(Eigen::Index(k)) += weight;
        return;
      }
    }
    atoms_.push_back(atom);
    w_.conservativeResize(w_.size() + 1);
    w_(w_.size() - 1) = weight;
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const RealVector& weights() const { return w_; }
  double total() const { return w_.sum(); }
  const Matrix& dual() const { return dual_; }
  bool centered() const { return centered_; }

  // Follows the central path until mu (n + K) <= relative_gap * sum w.
  void solve(double relative_gap) {
    const Eigen::Index n = dims_.total();
    const double floor = 1e-7 * total() / double(w_.size());
    for (Eigen::Index k = 0; k < w_.size(); ++k) w_(k) = std::max(w_(k), floor);
    // Start well inside the cone: a near-singular slack makes centering slow.
    for (double pad = 1e-4 * total() / double(n);
         min_eigenvalue(slack_matrix(w_)) <= 1e-6 * total() / double(n); pad *= 4.0) {
      for (Eigen::Index i = 0; i < dims_.a; ++i)
        for (Eigen::Index j = 0; j < dims_.b; ++j) add(make_atom(Vector::Unit(dims_.a, i), Vector::Unit(dims_.b, j)), pad);
    }
    Matrix x(n, Eigen::Index(atoms_.size()));
    for (std::size_t k = 0; k < atoms_.size(); ++k) x.col(Eigen::Index(k)) = atoms_[k].x;
    const double count = double(n + w_.size());
    double mu = 1e-1 * total() / count;
    centered_ = false;
    for (int outer = 0, misses = 0; outer < 200 && misses < 4; ++outer) {
      const bool near_end = mu * count <= 1e-6 * total();
      if (!center(x, mu) && !near_end) {
        ++misses;
        continue;
      }
      misses = 0;
      // Below a 1e-6 relative gap the decrement is limited by rounding, so an
      // unfinished center still gives a usable dual.
      if (near_end || mu * count <= relative_gap * total()) {
        centered_ = true;
        break;
      }
      mu *= 0.2;
    }
  }

  // Moves weight along null combinations sum_k c_k x_k x_k^dagger = 0, which
  // leave S unchanged and do not increase sum w, until at most n^2 atoms
  // remain.
  void reduce() {
    const Eigen::Index n = dims_.total();
    const Eigen::Index limit = n * n;
    while (Eigen::Index(atoms_.size()) > limit) {
      const Eigen::Index m = limit + 1;
      Eigen::MatrixXd a(2 * n * n, m);
      for (Eigen::Index k = 0; k < m; ++k) {
        const Matrix xk = atoms_[std::size_t(k)].x * atoms_[std::size_t(k)].x.adjoint();
        a.col(k) << Eigen::Map<const Eigen::VectorXcd>(xk.data(), n * n).real(),
            Eigen::Map<const Eigen::VectorXcd>(xk.data(), n * n).imag();
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
      RealVector c = svd.matrixV().col(m - 1);
      if (c.sum() < 0.0) c = -c;
      // w - s c keeps S and lowers sum w for s > 0; stop at the first zero.
      double step = std::numeric_limits<double>::infinity();
      Eigen::Index hit = 0;
      for (Eigen::Index k = 0; k < m; ++k)
        if (c(k) > 0.0 && w_(k) / c(k) < step) step = w_(k) / c(k), hit = k;
      if (!std::isfinite(step)) {
        c = -c;
        for (Eigen::Index k = 0; k < m; ++k)
          if (c(k) > 0.0 && w_(k) / c(k) < step) step = w_(k) / c(k), hit = k;
      }
      w_.head(m) -= step * c;
      w_(hit) = 0.0;
      w_ = w_.cwiseMax(0.0);
      atoms_.erase(atoms_.begin() + hit);
      RealVector rest(w_.size() - 1);
      rest << w_.head(hit), w_.tail(w_.size() - hit - 1);
      w_ = rest;
    }
  }

  // Drops negligible atoms and, above max_terms, the lightest atoms whose
  // removal keeps S positive definite.
  void prune(int max_terms) {
    std::vector<std::size_t> order(atoms_.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return w_(i) < w_(j); });
    std::vector<bool> drop(atoms_.size(), false);
    Matrix s = slack_matrix(w_);
    std::size_t kept = atoms_.size();
    for (std::size_t k : order) {
      const bool negligible = w_(k) <= 1e-12 * total();
      if (!negligible && int(kept) <= max_terms) break;
      const Matrix reduced = s - w_(k) * atoms_[k].x * atoms_[k].x.adjoint();
      if (Eigen::LLT<Matrix>(reduced).info() != Eigen::Success) continue;
      s = reduced;
      drop[k] = true;
      --kept;
    }
    std::vector<Atom> atoms;
    std::vector<double> w;
    for (std::size_t k = 0; k < atoms_.size(); ++k)
      if (!drop[k]) atoms.push_back(atoms_[k]), w.push_back(w_(k));
    atoms_ = std::move(atoms);
    w_ = Eigen::Map<RealVector>(w.data(), Eigen::Index(w.size()));
  }

 private:
  Matrix slack_matrix(const RealVector& w) const {
    Matrix s = -rho_;
    for (std::size_t k = 0; k < atoms_.size(); ++k) s.noalias() += w(Eigen::Index(k)) * atoms_[k].x * atoms_[k].x.adjoint();
    return s;
  }

  // phi_mu(w), or +inf outside the domain.
  double barrier(const RealVector& w, double mu) const {
    if (w.minCoeff() <= 0.0) return std::numeric_limits<double>::infinity();
    Eigen::LLT<Matrix> llt(slack_matrix(w));
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const double logdet = 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
    return w.sum() - mu * logdet - mu * w.array().log().sum();
  }

  // Damped Newton on the barrier at fixed mu; true once the decrement is small.
  bool center(const Matrix& x, double mu) {
    const Eigen::Index n = dims_.total();
    for (int step = 0; step < 400; ++step) {
      Eigen::LLT<Matrix> llt(slack_matrix(w_));
      if (llt.info() != Eigen::Success) return false;
      const Matrix s_inv = llt.solve(Matrix::Identity(n, n));
      dual_ = mu * hermitian_part(s_inv);
      const Matrix gram = x.adjoint() * s_inv * x;
      const RealVector inv_w = w_.cwiseInverse();
      const RealVector grad =
          RealVector::Ones(w_.size()) - mu * gram.diagonal().real() - mu * inv_w;
      Eigen::MatrixXd hess = mu * gram.cwiseAbs2();
      hess.diagonal() += mu * inv_w.cwiseAbs2();
      const RealVector delta = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(delta);
      if (!(decrement > 1e-9 * mu)) return true;
      double alpha = 1.0;
      for (Eigen::Index k = 0; k < w_.size(); ++k)
        if (delta(k) < 0.0) alpha = std::min(alpha, -0.99 * w_(k) / delta(k));
      const double current = barrier(w_, mu);
      int tries = 0;
      while (barrier(w_ + alpha * delta, mu) > current - 0.25 * alpha * decrement && tries < 60) alpha *= 0.5, ++tries;
      if (tries == 60) return decrement < 1e-5 * mu;
      w_ += alpha * delta;
      if (current - barrier(w_, mu) <= 1e-15 * std::abs(current)) return decrement < 1e-5 * mu;
    }
    return false;
  }

  const Matrix& rho_;
  Dims dims_;
  std::vector<Atom> atoms_;
  RealVector w_;
  Matrix dual_;
  bool centered_ = false;
};

// Column generation for min t  s.t.  rho <= t sigma, sigma separable.
// Returns atoms and normalized weights.
std::pair<std::vector<Atom>, RealVector> dominance_search(const Matrix& rho, Dims d, std::vector<Atom> seeds,
                                                          std::vector<double> seed_weights, int max_terms,
                                                          int rounds, Rng& rng) {
  DominanceMaster master(rho, d);
  // The computational product basis with weight 2 makes S = 2I - rho + ... > 0.
  for (Eigen::Index i = 0; i < d.a; ++i)
    for (Eigen::Index j = 0; j < d.b; ++j) master.add(make_atom(Vector::Unit(d.a, i), Vector::Unit(d.b, j)), 2.0);
  for (std::size_t k = 0; k < seeds.size(); ++k) master.add(seeds[k], seed_weights[k]);
  double last_total = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int round = 0; round < rounds; ++round) {
    master.solve(1e-8);
    const auto priced = price_products(master.dual(), d, rng, 3);
    if (master.centered() && priced.front().first <= 1.0 + 1e-9) break;
    // Tr(Y rho) / max <x|Y|x> would bound t from below if the pricing maximum were global.
    const double dual_estimate = real_trace(Matrix(master.dual() * rho)) / priced.front().first;
    if (master.centered() && std::log2(master.total() / dual_estimate) <= 1e-7) break;
    stalled = master.total() < last_total * (1.0 - 1e-8) ? 0 : stalled + 1;
    last_total = std::min(last_total, master.total());
    if (stalled >= 6) break;
    int added = 0;
    for (const auto& [value, atom] : priced) {
      if (value <= 1.0 + 1e-9 || added == 3) break;
      bool distinct = true;
      for (std::size_t k = master.atoms().size() - std::size_t(added); k < master.atoms().size(); ++k)
        distinct = distinct && std::abs(master.atoms()[k].x.dot(atom.x)) < 1.0 - 1e-8;
      if (!distinct) continue;
      master.add(atom, 1e-3 * master.total() / double(d.total()));
      ++added;
    }
    if (int(master.atoms().size()) > 2 * max_terms) master.reduce();
  }
  master.solve(1e-8);
  master.reduce();
  master.prune(max_terms);
  return {master.atoms(), master.weights() / master.total()};
}

class EnsembleSearch {
 public:
  EnsembleSearch(const Matrix& rho, Dims dims, int max_terms, int iters)
      : dims_(dims), objective_(rho), max_terms_(max_terms), iters_(iters) {}

  void reset(std::vector<Atom> atoms, RealVector weights) {
    atoms_ = std::move(atoms);
    weights_ = weights / weights.sum();
  }

  Matrix sigma(const RealVector& w) const {
    const Eigen::Index n = dims_.total();
    Matrix s = Matrix::Identity(n, n) * (kBarrier / double(n));
    for (std::size_t k = 0; k < atoms_.size(); ++k) s += (1.0 - kBarrier) * w(k) * atoms_[k].x * atoms_[k].x.adjoint();
    return s;
  }

  void run(Rng& rng) {
    for (int it = 0; it < iters_; ++it) {
      Evaluation e = objective_(sigma(weights_), true);
      track(e);
      const double gain = add_best_atom(e, rng);
      optimize_weights(8);
      prune();
      if (gain <= 1e-9) break;
    }
    track(objective_(sigma(weights_), false));
  }

  const std::vector<Atom>& best_atoms() const { return best_atoms_; }
  const RealVector& best_weights() const { return best_weights_; }

 private:
  void track(const Evaluation& e) {
    if (e.value < best_value_) {
      best_value_ = e.value;
      best_atoms_ = atoms_;
      best_weights_ = weights_;
    }
  }

  // Adds the product vector with the largest <x|G|x> and line-searches its
  // weight. Returns <x|G|x> - 1, the first-order improvement available.
  double add_best_atom(const Evaluation& e, Rng& rng) {
    const auto priced = price_products(e.g, dims_, rng, 1);
    const double best_value = priced.front().first;
    const Atom& best = priced.front().second;
    const double gain = best_value * (1.0 - kBarrier) - (1.0 - kBarrier * trace_of_g_over_n(e.g));
    if (gain <= 1e-12) return gain;

    atoms_.push_back(best);
    RealVector start(weights_.size() + 1);
    start << weights_, 0.0;
    RealVector corner = RealVector::Zero(start.size());
    corner(corner.size() - 1) = 1.0;
    auto f = [&](double theta) { return objective_(sigma((1.0 - theta) * start + theta * corner), false).value; };
    double lo = 0.0, hi = 1.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 40; ++i) {
      if (f1 < f2) {
        hi = x2, x2 = x1, f2 = f1, x1 = hi - gr * (hi - lo), f1 = f(x1);
      } else {
        lo = x1, x1 = x2, f1 = f2, x2 = lo + gr * (hi - lo), f2 = f(x2);
      }
    }
    const double theta = f1 < f2 ? x1 : x2;
    weights_ = f(theta) < f(0.0) ? RealVector((1.0 - theta) * start + theta * corner) : start;
    return gain;
  }

  double trace_of_g_over_n(const Matrix& g) const { return real_trace(g) / double(dims_.total()); }

  // Multiplicative updates w_k <- w_k <x_k|G|x_k>^beta, accepted only when
  // the objective decreases.
  void optimize_weights(int steps) {
    double beta = 1.0;
    Evaluation e = objective_(sigma(weights_), true);
    for (int s = 0; s < steps; ++s) {
      RealVector scores(atoms_.size());
      for (std::size_t k = 0; k < atoms_.size(); ++k)
        scores(k) = std::max((atoms_[k].x.adjoint() * e.g * atoms_[k].x)(0, 0).real(), 1e-300);
      bool accepted = false;
      for (int tries = 0; tries < 12 && !accepted; ++tries) {
        RealVector w = weights_.cwiseProduct(scores.array().pow(beta).matrix());
        w /= w.sum();
        Evaluation next = objective_(sigma(w), true);
        if (next.value < e.value) {
          weights_ = w;
          e = std::move(next);
          accepted = true;
          beta = std::min(beta * 1.5, 16.0);
        } else {
          beta *= 0.5;
        }
      }
      if (!accepted) break;
    }
    track(e);
  }

  void prune() {
    const double floor = 1e-12 * weights_.maxCoeff();
    std::vector<std::size_t> order(atoms_.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return weights_(i) > weights_(j); });
    std::vector<Atom> kept;
    std::vector<double> w;
    for (std::size_t k : order) {
      if (weights_(k) <= floor || int(kept.size()) >= max_terms_) continue;
      kept.push_back(atoms_[k]);
      w.push_back(weights_(k));
    }
    atoms_ = std::move(kept);
    weights_ = Eigen::Map<RealVector>(w.data(), Eigen::Index(w.size()));
    weights_ /= weights_.sum();
  }

  Dims dims_;
  Objective objective_;
  int max_terms_;
  int iters_;
  std::vector<Atom> atoms_;
  RealVector weights_;
  double best_value_ = std::numeric_limits<double>::infinity();
  std::vector<Atom> best_atoms_;
  RealVector best_weights_;
};

// Product vectors from the Schmidt decompositions of rho's eigenvectors,
// weighted by eigenvalue times squared Schmidt coefficient.
void schmidt_start(const Matrix& rho, Dims d, std::vector<Atom>& atoms, std::vector<double>& weights) {
  const auto s = eig_hermitian(rho);
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    if (s.values(i) <= 1e-12) continue;
    Matrix psi(d.a, d.b);
    for (Eigen::Index r = 0; r < d.a; ++r)
      for (Eigen::Index c = 0; c < d.b; ++c) psi(r, c) = s.vectors(r * d.b + c, i);
    Eigen::JacobiSVD<Matrix> svd(psi, Eigen::ComputeFullU | Eigen::ComputeFullV);
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      const double sv = svd.singularValues()(k);
      if (sv * sv * s.values(i) <= 1e-14) continue;
      atoms.push_back(make_atom(svd.matrixU().col(k), svd.matrixV().col(k).conjugate()));
      weights.push_back(s.values(i) * sv * sv);
    }
  }
}

SeparableEnsemble to_ensemble(const std::vector<Atom>& atoms, const RealVector& weights, Dims d) {
  std::vector<SeparableTerm> terms;
  for (std::size_t k = 0; k < atoms.size(); ++k) terms.push_back({(1.0 - kBarrier) * weights(k), atoms[k].a, atoms[k].b});
  const double share = kBarrier / double(d.total());
  for (Eigen::Index i = 0; i < d.a; ++i)
    for (Eigen::Index j = 0; j < d.b; ++j) {
      terms.push_back({share, Vector::Unit(d.a, i), Vector::Unit(d.b, j)});
    }
  // Renormalize against rounding so the weights sum to one.
  double total = 0.0;
  for (const auto& t : terms) total += t.weight;
  for (auto& t : terms) t.weight /= total;
  return SeparableEnsemble(std::move(terms), d);
}

double exact_objective(const Matrix& rho, const Matrix& sigma, SeparableObjective kind) {
  const DivergenceValue v =
      kind == SeparableObjective::MaxRelativeEntropy ? d_max_matrix(rho, sigma) : relative_entropy_matrix(rho, sigma);
  return v.finite ? v.bits : std::numeric_limits<double>::infinity();
}

}  // namespace

SeparableEnsemble separable_search(const BipartiteState& rho_ab, SeparableObjective objective,
                                   const EmaxConfig& config, const SeparableEnsemble* warm_start) {
  const Dims d = rho_ab.dims();
  if (d.a < 2 || d.b < 2) throw ValidationError("separable_search: both factors need dimension >= 2");
  if (d.total() > 16) throw ValidationError("separable_search: joint dimension above 16 is out of range");
  if (config.restarts < 1 || config.iters < 1) throw ValidationError("separable_search: restarts and iters must be positive");
  if (warm_start && !(warm_start->dims() == d)) throw ValidationError("separable_search: warm start has different dims");
  const int max_terms = config.terms > 0 ? config.terms : int(d.total() * d.total());
  const Matrix& rho = rho_ab.state().matrix();
  const Rng root(config.seed);

  std::optional<SeparableEnsemble> best;
  double best_value = std::numeric_limits<double>::infinity();
  auto consider = [&](SeparableEnsemble candidate) {
    const double v = exact_objective(rho, candidate.assemble(), objective);
    if (!best || v < best_value) {
      best_value = v;
      best = std::move(candidate);
    }
  };

  for (int r = 0; r < config.restarts; ++r) {
    Rng rng = root.split(std::uint64_t(r));
    std::vector<Atom> atoms;
    std::vector<double> w;
    if (r == 0) {
      schmidt_start(rho, d, atoms, w);
    } else {
      for (Eigen::Index k = 0; k < d.total(); ++k) {
        atoms.push_back(make_atom(random_unit_vector(d.a, rng), random_unit_vector(d.b, rng)));
        w.push_back(1.0);
      }
    }
    if (atoms.empty()) {
      atoms.push_back(make_atom(Vector::Unit(d.a, 0), Vector::Unit(d.b, 0)));
      w.push_back(1.0);
    }
    if (objective == SeparableObjective::MaxRelativeEntropy) {
      const auto [found, weights] = dominance_search(rho, d, atoms, w, max_terms, config.iters, rng);
      consider(to_ensemble(found, weights, d));
    } else {
      EnsembleSearch search(rho, d, max_terms, config.iters);
      search.reset(atoms, Eigen::Map<RealVector>(w.data(), Eigen::Index(w.size())));
      search.run(rng);
      consider(to_ensemble(search.best_atoms(), search.best_weights(), d));
    }
  }
  if (warm_start) consider(*warm_start);
  return *best;
}

}  // namespace qdiv
