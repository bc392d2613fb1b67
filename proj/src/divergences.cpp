#include <qdiv/divergences.hpp>

#include <array>

namespace qdiv {

namespace {

// Eigenvectors and eigenvalues of a positive matrix restricted to its
// support (relative cutoff tol::support_relative).
struct SupportFrame {
  Matrix vectors;      // d x r
  RealVector values;   // r, descending
};

SupportFrame support_frame(const Matrix& m) {
  const auto s = eig_hermitian(m);
  const double cutoff = tol::support_relative * std::max(s.values(0), 0.0);
  Eigen::Index r = 0;
  while (r < s.dim() && s.values(r) > cutoff && s.values(r) > 0.0) ++r;
  return {s.vectors.leftCols(r), s.values.head(r)};
}

// The quantities Tr rho^s sigma^{1-s} reduce to sums over the overlap matrix
// W_ij = |<u_i|v_j>|^2 of the two support eigenbases.
struct Overlap {
  RealVector log_p;
  RealVector log_q;
  Eigen::MatrixXd w;

  double power_trace(double s) const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < log_p.size(); ++i)
      for (Eigen::Index j = 0; j < log_q.size(); ++j) {
        if (w(i, j) == 0.0) continue;
        total += w(i, j) * std::exp(s * log_p(i) + (1.0 - s) * log_q(j));
      }
    return total;
  }
};

Overlap overlap(const Matrix& rho, const Matrix& sigma) {
  const auto fr = support_frame(rho);
  const auto fs = support_frame(sigma);
  Overlap o;
  o.log_p = fr.values.array().log().matrix();
  o.log_q = fs.values.array().log().matrix();
  o.w = (fr.vectors.adjoint() * fs.vectors).cwiseAbs2();
  return o;
}

void check_pair(const HermitianOperator& rho, const HermitianOperator& sigma, const char* where) {
  require_same_dim(rho.dim(), sigma.dim(), where);
  require_psd(rho.matrix(), where);
  require_psd(sigma.matrix(), where);
}

// a <= b + slack on the extended reals.
bool leq(const DivergenceValue& a, const DivergenceValue& b, double slack) {
  if (!b.finite) return true;
  if (!a.finite) return false;
  return a.bits <= b.bits + slack;
}

}  // namespace

bool support_included(const Matrix& rho, const Matrix& sigma) {
  const auto fs = support_frame(sigma);
  const Matrix complement = Matrix::Identity(rho.rows(), rho.cols()) - fs.vectors * fs.vectors.adjoint();
  const Matrix outside = complement * rho * complement;
  return eigenvalues_descending(outside).cwiseAbs().maxCoeff() <= tol::support_inclusion;
}

DivergenceValue d_max_matrix(const Matrix& rho, const Matrix& sigma) {
  const auto fs = support_frame(sigma);
  if (fs.values.size() == 0) return DivergenceValue::infinite();
  const Matrix complement = Matrix::Identity(rho.rows(), rho.cols()) - fs.vectors * fs.vectors.adjoint();
  if (eigenvalues_descending(complement * rho * complement).cwiseAbs().maxCoeff() > tol::support_inclusion) {
    return DivergenceValue::infinite();
  }
  const RealVector inv_sqrt = fs.values.cwiseSqrt().cwiseInverse();
  const Matrix c = inv_sqrt.cast<Complex>().asDiagonal() * (fs.vectors.adjoint() * rho * fs.vectors) *
                   inv_sqrt.cast<Complex>().asDiagonal();
  const double top = max_eigenvalue(c);
  if (!(top > 0.0)) return DivergenceValue::infinite();
  return DivergenceValue::of(std::log2(top));
}

DivergenceValue d_min_matrix(const Matrix& rho, const Matrix& sigma) {
  const Matrix pi = support_projector_matrix(rho);
  const double o = trace_product(pi, sigma);
  if (!(o > 1e-14)) return DivergenceValue::infinite();
  return DivergenceValue::of(0.0 - std::log2(o));
}

DivergenceValue relative_entropy_matrix(const Matrix& rho, const Matrix& sigma) {
  if (!support_included(rho, sigma)) return DivergenceValue::infinite();
  const auto fr = support_frame(rho);
  const auto fs = support_frame(sigma);
  double entropy_term = 0.0;
  for (Eigen::Index i = 0; i < fr.values.size(); ++i) entropy_term += fr.values(i) * std::log2(fr.values(i));
  double cross_term = 0.0;
  for (Eigen::Index j = 0; j < fs.values.size(); ++j) {
    const double weight = (fs.vectors.col(j).adjoint() * rho * fs.vectors.col(j))(0, 0).real();
    cross_term += weight * std::log2(fs.values(j));
  }
  return DivergenceValue::of(entropy_term - cross_term);
}

DivergenceValue d_max(const HermitianOperator& rho, const HermitianOperator& sigma) {
  check_pair(rho, sigma, "d_max");
  return d_max_matrix(rho.matrix(), sigma.matrix());
}

DivergenceValue d_min(const HermitianOperator& rho, const HermitianOperator& sigma) {
  check_pair(rho, sigma, "d_min");
  return d_min_matrix(rho.matrix(), sigma.matrix());
}

DivergenceValue relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma) {
  check_pair(rho, sigma, "relative_entropy");
  return relative_entropy_matrix(rho.matrix(), sigma.matrix());
}

DivergenceValue renyi_relative(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("renyi_relative: alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  check_pair(rho, sigma, "renyi_relative");
  const double q = overlap(rho.matrix(), sigma.matrix()).power_trace(alpha);
  if (!(q > 0.0)) return DivergenceValue::infinite();
  return DivergenceValue::of(std::log2(q) / (alpha - 1.0));
}

double chernoff_objective(const HermitianOperator& rho, const HermitianOperator& sigma, double s) {
  check_pair(rho, sigma, "chernoff_objective");
  return overlap(rho.matrix(), sigma.matrix()).power_trace(std::clamp(s, 0.0, 1.0));
}

DivergenceValue chernoff_bound(const HermitianOperator& rho, const HermitianOperator& sigma) {
  check_pair(rho, sigma, "chernoff_bound");
  const Overlap o = overlap(rho.matrix(), sigma.matrix());

  constexpr int grid = 64;
  std::array<double, grid> values{};
  int best = 0;
  for (int k = 0; k < grid; ++k) {
    values[k] = o.power_trace(double(k) / (grid - 1));
    if (values[k] < values[best]) best = k;
  }
  double lo = double(std::max(best - 1, 0)) / (grid - 1);
  double hi = double(std::min(best + 1, grid - 1)) / (grid - 1);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = o.power_trace(x1), f2 = o.power_trace(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - g * (hi - lo), f1 = o.power_trace(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + g * (hi - lo), f2 = o.power_trace(x2);
    }
  }
  const double minimum = std::min({values[best], f1, f2});
  if (!(minimum > 1e-300)) return DivergenceValue::infinite();
  return DivergenceValue::of(0.0 - std::log2(minimum));
}

double positive_excess(const Matrix& rho, const Matrix& sigma, double lambda) {
  const Matrix diff = rho - lambda * sigma;
  const double zero = projector_zero_cutoff(diff);
  const RealVector ev = eigenvalues_descending(diff);
  double total = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > zero) total += ev(i);
  return total;
}

DMaxForms d_max_forms(const HermitianOperator& rho, const HermitianOperator& sigma) {
  check_pair(rho, sigma, "d_max_forms");
  if (!support_included(rho.matrix(), sigma.matrix())) {
    throw ValidationError("d_max_forms: supp rho is not contained in supp sigma");
  }
  DMaxForms f;
  const DivergenceValue eig = d_max_matrix(rho.matrix(), sigma.matrix());
  f.eigen_bits = eig.bits;
  f.projector_residual = positive_excess(rho.matrix(), sigma.matrix(), std::exp2(eig.bits));

  // The other two forms work on supp sigma only, without inverting sigma.
  const auto fs = support_frame(sigma.matrix());
  const Matrix r = fs.vectors.adjoint() * rho.matrix() * fs.vectors;
  const Matrix s = fs.values.cast<Complex>().asDiagonal();
  const double upper = (rho.trace() / fs.values.minCoeff()) * (1.0 + 1e-9) + 1e-300;

  auto bisect = [&](auto&& feasible) {
    double lo = 0.0, hi = upper;
    for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? hi : lo) = mid;
    }
    return std::log2(hi);
  };
  // Eigenvalues of rho - lambda sigma carry rounding noise of order
  // machine epsilon times the matrix size; anything below that is zero here.
  auto noise = [&](const Matrix& m) { return 8.0 * std::numeric_limits<double>::epsilon() * double(m.rows()) * max_abs(m); };
  f.dominance_bits = bisect([&](double lambda) {
    const Matrix m = lambda * s - r;
    return min_eigenvalue(m) >= -noise(m);
  });
  f.projector_bits = bisect([&](double lambda) {
    const Matrix m = r - lambda * s;
    const RealVector ev = eigenvalues_descending(m);
    const double zero = noise(m);
    double excess = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > zero) excess += ev(i);
    return excess <= 0.0;
  });
  return f;
}

double h_min(const DensityOperator& rho) { return 0.0 - std::log2(max_eigenvalue(rho.matrix())); }

double h_max(const DensityOperator& rho) {
  return std::log2(double(support_frame(rho.matrix()).values.size()));
}

namespace {

Matrix identity_a_tensor(const BipartiteState& rho_ab, const DensityOperator& sigma_b) {
  if (sigma_b.dim() != rho_ab.dims().b) {
    std::ostringstream os;
    os << "conditional entropy: sigma_B has dimension " << sigma_b.dim() << " but the B factor has dimension "
       << rho_ab.dims().b;
    throw ValidationError(os.str());
  }
  return kron(Matrix::Identity(rho_ab.dims().a, rho_ab.dims().a), sigma_b.matrix());
}

Matrix product_of_marginals(const BipartiteState& rho_ab) {
  const Matrix& m = rho_ab.state().matrix();
  return kron(partial_trace_matrix(m, rho_ab.dims(), Subsystem::A),
              partial_trace_matrix(m, rho_ab.dims(), Subsystem::B));
}

double negated(const DivergenceValue& v) {
  return v.finite ? -v.bits : -std::numeric_limits<double>::infinity();
}

}  // namespace

double h_min_cond(const BipartiteState& rho_ab, const DensityOperator& sigma_b) {
  return negated(d_max_matrix(rho_ab.state().matrix(), identity_a_tensor(rho_ab, sigma_b)));
}

double h_max_cond(const BipartiteState& rho_ab, const DensityOperator& sigma_b) {
  return negated(d_min_matrix(rho_ab.state().matrix(), identity_a_tensor(rho_ab, sigma_b)));
}

DivergenceValue mutual_min(const BipartiteState& rho_ab) {
  return d_min_matrix(rho_ab.state().matrix(), product_of_marginals(rho_ab));
}

DivergenceValue mutual_max(const BipartiteState& rho_ab) {
  return d_max_matrix(rho_ab.state().matrix(), product_of_marginals(rho_ab));
}

double helstrom_min_error(const DensityOperator& rho, const DensityOperator& sigma) {
  return 0.5 * (1.0 - 0.5 * trace_distance(rho, sigma));
}

DivergenceReport divergence_report(const DensityOperator& rho, const DensityOperator& sigma) {
  DivergenceReport r;
  r.d_min = d_min(rho, sigma);
  r.d_max = d_max(rho, sigma);
  r.rel_entropy = relative_entropy(rho, sigma);
  r.chernoff = chernoff_bound(rho, sigma);
  r.sandwich_ok = leq(r.d_min, r.rel_entropy, 1e-9) && leq(r.rel_entropy, r.d_max, 1e-9);
  return r;
}

}  // namespace qdiv
