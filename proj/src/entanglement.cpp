#include <qdiv/entanglement.hpp>
#include <qdiv/random.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qdiv {

SeparableEnsemble::SeparableEnsemble(std::vector<SeparableTerm> terms, Dims dims)
    : terms_(std::move(terms)), dims_(dims) {
  if (terms_.empty()) throw ValidationError("SeparableEnsemble: no terms");
  double total = 0.0;
  for (const auto& t : terms_) {
    if (t.a.size() != dims_.a || t.b.size() != dims_.b)
      throw ValidationError("SeparableEnsemble: term vector has the wrong dimension");
    if (!(t.weight >= -1e-10)) throw ValidationError("SeparableEnsemble: negative weight");
    if (std::abs(t.a.norm() - 1.0) > 1e-10 || std::abs(t.b.norm() - 1.0) > 1e-10)
      throw ValidationError("SeparableEnsemble: term vectors must be unit vectors");
    total += t.weight;
  }
  if (std::abs(total - 1.0) > 1e-10) throw ValidationError("SeparableEnsemble: weights do not sum to one");
}

Matrix SeparableEnsemble::assemble() const {
  Matrix s = Matrix::Zero(dims_.total(), dims_.total());
  for (const auto& t : terms_) {
    const Vector x = kron(t.a, t.b);
    s.noalias() += std::max(t.weight, 0.0) * x * x.adjoint();
  }
  return hermitian_part(s);
}

HermitianOperator partial_transpose(const BipartiteState& rho_ab, Subsystem sys) {
  return HermitianOperator(partial_transpose_matrix(rho_ab.state().matrix(), rho_ab.dims(), sys));
}

bool is_ppt(const BipartiteState& rho_ab) {
  return min_eigenvalue(partial_transpose_matrix(rho_ab.state().matrix(), rho_ab.dims(), Subsystem::B)) >= -1e-9;
}

// ---------------------------------------------------------------------------
// PPT relaxation. Consensus splitting on
//   min Tr tau  s.t.  tau in C1 = {tau >= rho},  tau in C2 = {tau^Gamma >= 0},
// with the linear objective folded into the C1 step. Scaled duals u1, u2
// give Y = (I + step u1)_+ >= 0 and W = (Gamma(step u2))_+ >= 0, and for any
// such pair Tr(Y rho) / mu_max(Y + W^Gamma) <= t_ppt by weak duality.

PptLowerBound ppt_emax_bound(const BipartiteState& rho_ab) {
  const Dims d = rho_ab.dims();
  if (d.total() > 16) throw ValidationError("ppt_emax_bound: joint dimension above 16 is out of range");
  const Matrix& rho = rho_ab.state().matrix();
  const Eigen::Index n = d.total();
  const Matrix id = Matrix::Identity(n, n);
  auto gamma = [&](const Matrix& x) { return partial_transpose_matrix(x, d, Subsystem::B); };

  double step = 1.0;
  Matrix z = rho, u1 = Matrix::Zero(n, n), u2 = Matrix::Zero(n, n);
  double best_lower = 0.0, best_upper = std::numeric_limits<double>::infinity();
  double primal_res = 0.0, dual_res = 0.0;
  const long cap = 50000;
  long it = 0;
  for (; it < cap; ++it) {
    const Matrix x1 = rho + positive_part(Matrix(z - u1 - rho - id / step));
    const Matrix x2 = gamma(positive_part(gamma(Matrix(z - u2))));
    const Matrix z_old = z;
    z = 0.5 * (x1 + u1 + x2 + u2);
    u1 += x1 - z;
    u2 += x2 - z;
    primal_res = std::max((x1 - z).norm(), (x2 - z).norm());
    dual_res = step * (z - z_old).norm() * std::sqrt(2.0);

    if (it % 25 == 24) {
      const Matrix y = positive_part(Matrix(id + step * u1));
      const Matrix w = positive_part(gamma(Matrix(step * u2)));
      const double top = max_eigenvalue(Matrix(y + gamma(w)));
      if (top > 0.0) best_lower = std::max(best_lower, real_trace(Matrix(y * rho)) / top);
      Matrix tau = rho + positive_part(Matrix(z - rho));
      const double shift = std::max(0.0, -min_eigenvalue(gamma(tau)));
      tau += shift * id;
      best_upper = std::min(best_upper, real_trace(tau));
      if (best_lower > 0.0 && best_upper - best_lower <= 1e-6 * best_lower) break;
    }
    if (it % 10 == 9) {
      // Residual balancing; the scaled duals follow the step.
      double factor = 1.0;
      if (primal_res > 10.0 * dual_res) factor = 2.0;
      else if (dual_res > 10.0 * primal_res) factor = 0.5;
      if (factor != 1.0) {
        step *= factor;
        u1 /= factor;
        u2 /= factor;
      }
    }
  }
  if (!(best_lower > 0.0)) throw SolverError("ppt_emax_bound: no dual certificate", primal_res, dual_res);
  const double gap_bits = std::log2(best_upper) - std::log2(best_lower);
  if (it >= cap && gap_bits > 1e-3) throw SolverError("ppt_emax_bound: iteration cap with gap above 1e-3 bits", primal_res, dual_res);
  return {std::log2(best_lower), std::log2(best_upper), it};
}

double ppt_emax_lower(const BipartiteState& rho_ab) { return ppt_emax_bound(rho_ab).bits; }

EmaxResult emax(const BipartiteState& rho_ab, const EmaxConfig& config) {
  SeparableEnsemble witness = separable_search(rho_ab, SeparableObjective::MaxRelativeEntropy, config);
  const DivergenceValue upper = d_max_matrix(rho_ab.state().matrix(), witness.assemble());
  if (!upper.finite) throw ConsistencyError("emax: witness does not cover the support of rho");
  const double lower = ppt_emax_lower(rho_ab);
  return EmaxResult{upper.bits, lower, std::move(witness), std::max(0.0, upper.bits - lower), 1e-6};
}

double rel_ent_entanglement(const BipartiteState& rho_ab, const EmaxConfig& config,
                            const SeparableEnsemble* warm_start) {
  const SeparableEnsemble best = separable_search(rho_ab, SeparableObjective::RelativeEntropy, config, warm_start);
  const DivergenceValue v = relative_entropy_matrix(rho_ab.state().matrix(), best.assemble());
  if (!v.finite) throw ConsistencyError("rel_ent_entanglement: witness does not cover the support of rho");
  return v.bits;
}

// ---------------------------------------------------------------------------

namespace {

double dmax_bits(const Matrix& rho, const Matrix& sigma) {
  const DivergenceValue v = d_max_matrix(rho, sigma);
  return v.finite ? v.bits : std::numeric_limits<double>::infinity();
}

// Difference of two values that may both be +inf.
double excess(double lhs, double rhs) {
  if (std::isinf(lhs) && std::isinf(rhs) && lhs > 0 && rhs > 0) return 0.0;
  return lhs - rhs;
}

}  // namespace

MonotoneReport monotone_condition_suite(const BipartiteState& rho_ab, std::uint64_t seed) {
  constexpr double tolerance = 1e-8;
  Rng rng(seed);
  const Dims d = rho_ab.dims();
  const Eigen::Index n = d.total();
  const Matrix& rho = rho_ab.state().matrix();
  const Matrix sigma = random_density(n, rng).matrix();
  const double base = dmax_bits(rho, sigma);

  MonotoneReport report;
  auto add = [&](std::string name, double violation) {
    const bool pass = std::isfinite(violation) ? violation <= tolerance : false;
    report.checks.push_back({std::move(name), violation, pass});
    report.pass = report.pass && pass;
  };

  add("nonnegative", std::max(0.0, -base));
  add("zero_on_equal_states", std::abs(dmax_bits(rho, rho)));
  // sigma is full rank and random, so it differs from rho and D_max must be positive.
  add("positive_on_distinct_states", base > 0.0 ? 0.0 : 1.0 - base);

  const Matrix u = random_unitary(n, rng);
  add("unitary_invariance", std::abs(dmax_bits(u * rho * u.adjoint(), u * sigma * u.adjoint()) - base));

  double trace_out = 0.0;
  for (Subsystem keep : {Subsystem::A, Subsystem::B}) {
    const double reduced = dmax_bits(partial_trace_matrix(rho, d, keep), partial_trace_matrix(sigma, d, keep));
    trace_out = std::max(trace_out, excess(reduced, base));
  }
  add("partial_trace_monotone", std::max(0.0, trace_out));

  // Instrument with elements V_i: rho_i = V_i rho V_i^dagger, alpha_i = Tr rho_i.
  const auto instrument = random_instrument(n, 2 + rng.integer(0, 1), rng);
  double weighted = 0.0, unnormalized_sum = 0.0;
  for (const Matrix& v : instrument.elements()) {
    const Matrix ri = v * rho * v.adjoint(), si = v * sigma * v.adjoint();
    const double alpha = real_trace(ri), beta = real_trace(si);
    if (alpha <= 1e-14) continue;
    weighted += alpha * dmax_bits(ri / alpha, si / beta);
    unnormalized_sum += dmax_bits(ri, si);
  }
  add("instrument_weighted_below_unnormalized_sum", std::max(0.0, excess(weighted, unnormalized_sum)));
  add("instrument_weighted_below_total", std::max(0.0, excess(weighted, base)));

  // Orthogonal projectors from a random basis split into consecutive blocks.
  const Matrix basis = random_unitary(n, rng);
  const Eigen::Index blocks = std::min<Eigen::Index>(n, 2 + rng.integer(0, 1));
  Matrix rho_blocks = Matrix::Zero(n, n), sigma_blocks = Matrix::Zero(n, n);
  double largest = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < blocks; ++k) {
    const Eigen::Index begin = k * n / blocks, end = (k + 1) * n / blocks;
    const Matrix cols = basis.middleCols(begin, end - begin);
    const Matrix p = cols * cols.adjoint();
    const Matrix rp = p * rho * p, sp = p * sigma * p;
    rho_blocks += rp;
    sigma_blocks += sp;
    if (real_trace(rp) > 1e-14) largest = std::max(largest, dmax_bits(rp, sp));
  }
  add("block_diagonal_is_largest_block", std::abs(excess(dmax_bits(rho_blocks, sigma_blocks), largest)));

  const Eigen::Index pd = 2 + rng.integer(0, 1);
  const Eigen::Index rank = 1 + rng.integer(0, pd - 1);
  const Matrix pv = random_isometry(pd, rank, rng);
  const Matrix proj = pv * pv.adjoint();
  add("projector_tensor_invariance", std::abs(excess(dmax_bits(kron(rho, proj), kron(sigma, proj)), base)));
  return report;
}

}  // namespace qdiv
