#include <qdiv/suite.hpp>

#include <qdiv/entanglement.hpp>
#include <qdiv/random.hpp>
#include <qdiv/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace qdiv {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double bits(const DivergenceValue& v) { return v.finite ? v.bits : inf; }

// Amount by which lhs <= rhs fails; either side may be +inf.
double excess(double lhs, double rhs) {
  if (lhs == rhs || rhs == inf || lhs == -inf) return 0.0;
  if (lhs == inf || rhs == -inf) return inf;
  return std::max(0.0, lhs - rhs);
}

double difference(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b);
}

// A family of named checks computed together on one random instance.
struct Check {
  std::vector<std::string> names;
  double tolerance;
  int cap;  // at most this many trials; 0 for no cap
  std::function<std::vector<double>(Rng&, const SuiteConfig&)> trial;
};

Eigen::Index pick_dim(Rng& rng, const SuiteConfig& c) {
  return c.dims[std::size_t(rng.integer(0, int(c.dims.size()) - 1))];
}

DensityOperator any_rank_state(Eigen::Index d, Rng& rng) {
  return random_density(d, rng.integer(1, int(d)), rng);
}

// Positive operator with trace in [0.5, 2].
Matrix positive_operator(Eigen::Index d, Rng& rng) { return random_density(d, rng).matrix() * rng.uniform(0.5, 2.0); }

double positive_difference_trace(const Matrix& proj, const Matrix& diff) { return trace_product(proj, diff); }

std::vector<double> diag_weights(Eigen::Index d, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(d));
  double total = 0.0;
  for (auto& x : w) total += (x = rng.uniform(0.05, 1.0));
  for (auto& x : w) x /= total;
  return w;
}

// Random channel in -> out with one to three Kraus operators (more when out < in).
QuantumChannel channel_between(Eigen::Index in, Eigen::Index out, Rng& rng) {
  const Eigen::Index env = std::max<Eigen::Index>(rng.integer(1, 3), (in + out - 1) / out);
  return random_channel(in, out, env, rng);
}

Matrix local_unitary(Dims d, Rng& rng) { return kron(random_unitary(d.a, rng), random_unitary(d.b, rng)); }

Dims small_bipartite(Rng& rng) { return rng.integer(0, 1) == 0 ? Dims{2, 2} : Dims{2, 3}; }

// Smallest lambda on a 1e-4-bit grid with sum_i (p_i - 2^lambda q_i)_+ <= eps.
double scan_smooth_dmax(const std::vector<double>& p, const std::vector<double>& q, double eps) {
  double top = -inf;
  for (std::size_t i = 0; i < p.size(); ++i) top = std::max(top, std::log2(p[i] / q[i]));
  auto removed = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::max(0.0, p[i] - std::exp2(lambda) * q[i]);
    return s;
  };
  double lambda = top;
  for (double l = top; l > top - 40.0; l -= 1e-4) {
    if (removed(l) > eps) break;
    lambda = l;
  }
  return lambda;
}

std::vector<Check> all_checks() {
  std::vector<Check> checks;

  // ---- operator core ----
  checks.push_back({{"projector_maximizes_difference"}, 1e-9, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const Matrix a = random_hermitian(d, rng).matrix(), b = random_hermitian(d, rng).matrix();
    const Matrix p = random_effect(d, rng).matrix();
    const Matrix diff = a - b;
    const double t = positive_difference_trace(p, diff);
    double v = 0.0;
    v = std::max(v, t - positive_difference_trace(sign_projector(diff, Relation::GreaterEqual), diff));
    v = std::max(v, t - positive_difference_trace(sign_projector(diff, Relation::Greater), diff));
    v = std::max(v, positive_difference_trace(sign_projector(diff, Relation::LessEqual), diff) - t);
    v = std::max(v, positive_difference_trace(sign_projector(diff, Relation::Less), diff) - t);
    return std::vector<double>{v};
  }});

  checks.push_back({{"spectral_projector_tail_single_copy"}, 1e-9, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const Matrix rho = any_rank_state(d, rng).matrix();
    const Matrix omega = positive_operator(d, rng);
    double v = 0.0;
    for (double gamma : {-1.0, 0.0, 0.5, 2.0}) {
      const Matrix proj = sign_projector(Matrix(rho - std::exp2(gamma) * omega), Relation::GreaterEqual);
      v = std::max(v, trace_product(proj, omega) - std::exp2(-gamma));
    }
    return std::vector<double>{v};
  }});

  checks.push_back({{"channel_contracts_positive_part"}, 1e-9, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const Matrix a = random_hermitian(d, rng).matrix(), b = random_hermitian(d, rng).matrix();
    const auto channel = channel_between(d, pick_dim(rng, c), rng);
    const Matrix ta = apply_kraus(channel.kraus(), a), tb = apply_kraus(channel.kraus(), b);
    const double after = trace_product(sign_projector(Matrix(ta - tb), Relation::GreaterEqual), Matrix(ta - tb));
    const double before = trace_product(sign_projector(Matrix(a - b), Relation::GreaterEqual), Matrix(a - b));
    return std::vector<double>{std::max(0.0, after - before)};
  }});

  checks.push_back({{"trace_norm_bounds_projected_difference"}, 1e-9, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const Matrix a = any_rank_state(d, rng).matrix(), b = any_rank_state(d, rng).matrix();
    const double eps = trace_norm_hermitian(Matrix(a - b));
    const Matrix p = random_effect(d, rng).matrix();
    return std::vector<double>{std::max(0.0, trace_product(p, Matrix(a - b)) - eps)};
  }});

  checks.push_back({{"gentle_measurement"}, 1e-9, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    Matrix rho = any_rank_state(d, rng).matrix();
    if (rng.integer(0, 1) == 1) rho *= rng.uniform(0.3, 1.0);
    const Matrix lambda = random_effect(d, rng).matrix();
    const double delta = std::max(0.0, 1.0 - trace_product(lambda, rho));
    const Matrix root = psd_sqrt(lambda);
    const double moved = trace_norm_hermitian(Matrix(rho - root * rho * root));
    return std::vector<double>{std::max(0.0, moved - 2.0 * std::sqrt(delta))};
  }});

  checks.push_back({{"fidelity_trace_distance_chain"}, 1e-9, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator a = any_rank_state(d, rng), b = any_rank_state(d, rng);
    const double f = fidelity(a, b);
    const double half = 0.5 * trace_distance(a, b);
    const double middle = std::sqrt(std::max(0.0, 1.0 - f * f));
    const double right = std::sqrt(std::max(0.0, 2.0 * (1.0 - f)));
    return std::vector<double>{std::max({0.0, half - middle, middle - right})};
  }});

  checks.push_back({{"trace_distance_triangle"}, 1e-9, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator a = any_rank_state(d, rng), b = any_rank_state(d, rng), m = any_rank_state(d, rng);
    return std::vector<double>{std::max(0.0, trace_distance(a, b) - trace_distance(a, m) - trace_distance(m, b))};
  }});

  // ---- divergences ----
  checks.push_back({{"dmin_below_dmax"}, 1e-8, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng);
    const HermitianOperator sigma(positive_operator(d, rng));
    return std::vector<double>{excess(bits(d_min(rho, sigma)), bits(d_max(rho, sigma)))};
  }});

  checks.push_back({{"divergences_nonnegative_for_states", "dmax_zero_on_equal_states", "dmin_zero_on_equal_supports"},
                    1e-8, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng), sigma = any_rank_state(d, rng);
    const double neg = std::max({0.0, -bits(d_min(rho, sigma)), -bits(d_max(rho, sigma))});
    const double self = std::abs(bits(d_max(rho, rho)));
    // A different state on the same support as rho.
    const Matrix pi = support_projector_matrix(rho.matrix());
    Matrix other = pi * positive_operator(d, rng) * pi;
    other /= real_trace(other);
    const double same_support = std::abs(bits(d_min(rho, DensityOperator::trusted(other))));
    return std::vector<double>{neg, self, same_support};
  }});

  checks.push_back({{"dmax_monotone_under_channels", "dmin_monotone_under_channels"}, 1e-8, 0,
                    [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng), sigma = any_rank_state(d, rng);
    const auto channel = channel_between(d, pick_dim(rng, c), rng);
    const DensityOperator tr = apply_channel(channel, rho), ts = apply_channel(channel, sigma);
    return std::vector<double>{excess(bits(d_max(tr, ts)), bits(d_max(rho, sigma))),
                               excess(bits(d_min(tr, ts)), bits(d_min(rho, sigma)))};
  }});

  checks.push_back({{"dmin_jointly_convex", "dmax_mixture_bound"}, 1e-8, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const int m = rng.integer(2, 3);
    std::vector<double> p(static_cast<std::size_t>(m));
    double total = 0.0;
    for (auto& x : p) total += (x = rng.uniform(0.1, 1.0));
    Matrix rho_mix = Matrix::Zero(d, d), sigma_mix = Matrix::Zero(d, d);
    double convex = 0.0, worst = -inf;
    for (int i = 0; i < m; ++i) {
      const double w = p[std::size_t(i)] / total;
      const DensityOperator r = any_rank_state(d, rng), s = any_rank_state(d, rng);
      rho_mix += w * r.matrix();
      sigma_mix += w * s.matrix();
      convex += w * bits(d_min(r, s));
      worst = std::max(worst, bits(d_max(r, s)));
    }
    const DensityOperator rm = DensityOperator::trusted(rho_mix), sm = DensityOperator::trusted(sigma_mix);
    return std::vector<double>{excess(bits(d_min(rm, sm)), convex), excess(bits(d_max(rm, sm)), worst)};
  }});

  checks.push_back({{"relative_entropy_sandwich"}, 1e-8, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng), sigma = any_rank_state(d, rng);
    const double s = bits(relative_entropy(rho, sigma));
    return std::vector<double>{std::max(excess(bits(d_min(rho, sigma)), s), excess(s, bits(d_max(rho, sigma))))};
  }});

  checks.push_back({{"divergences_unitary_invariant"}, 1e-9, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng), sigma = random_density(d, rng);
    const Matrix u = random_unitary(d, rng);
    const DensityOperator ur = DensityOperator::trusted(u * rho.matrix() * u.adjoint());
    const DensityOperator us = DensityOperator::trusted(u * sigma.matrix() * u.adjoint());
    // Relative to the size of the values, which reach ~15 bits for skewed sigma.
    const double dmax = bits(d_max(rho, sigma)), dmin = bits(d_min(rho, sigma));
    return std::vector<double>{std::max(difference(bits(d_max(ur, us)), dmax) / std::max(1.0, std::abs(dmax)),
                                        difference(bits(d_min(ur, us)), dmin) / std::max(1.0, std::abs(dmin)))};
  }});

  checks.push_back({{"dmax_below_min_eigenvalue_bound", "dmin_below_trace_distance_bound",
                     "support_overlap_trace_distance_bound"},
                    1e-8, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng);
    // sigma of random rank containing supp rho: mix rho into a random state on a larger support.
    const DensityOperator sigma = DensityOperator::trusted(0.3 * rho.matrix() + 0.7 * any_rank_state(d, rng).matrix());
    const RealVector ev = eigenvalues_descending(sigma.matrix());
    double mu_min = inf;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > 1e-12 * ev(0)) mu_min = std::min(mu_min, ev(i));
    const double half = 0.5 * trace_distance(rho, sigma);
    const double overlap = trace_product(support_projector_matrix(rho.matrix()), sigma.matrix());
    return std::vector<double>{excess(bits(d_max(rho, sigma)), -std::log2(mu_min)),
                               excess(bits(d_min(rho, sigma)), -std::log2(1.0 - half)),
                               std::max(0.0, (1.0 - half) - overlap)};
  }});

  checks.push_back({{"dmax_forms_agree"}, 1e-8, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = random_density(d, rng), sigma = random_density(d, rng);
    return std::vector<double>{d_max_forms(rho, sigma).max_disagreement()};
  }});

  checks.push_back({{"renyi_approaches_dmin"}, 1e-12, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng), sigma = random_density(d, rng);
    const double dmin = bits(d_min(rho, sigma));
    double v = 0.0, last = inf;
    for (double alpha : {1e-2, 1e-3, 1e-4}) {
      const double err = std::abs(bits(renyi_relative(rho, sigma, alpha)) - dmin);
      v = std::max(v, err - last);
      last = err;
    }
    return std::vector<double>{v};
  }});

  checks.push_back({{"chernoff_exceeds_dmin"}, 1e-8, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng), sigma = any_rank_state(d, rng);
    return std::vector<double>{excess(bits(d_min(rho, sigma)), bits(chernoff_bound(rho, sigma)))};
  }});

  // ---- smoothing ----
  checks.push_back({{"smoothing_reduces_at_zero_eps"}, 1e-8, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng), sigma = random_density(d, rng);
    const double dmax = bits(d_max(rho, sigma)), dmin = bits(d_min(rho, sigma));
    return std::vector<double>{std::max(difference(smooth_dmax_exact(rho, sigma, 0.0).value_bits, dmax),
                                        difference(smooth_dmin_lower(rho, sigma, 1e-12).value_bits, dmin))};
  }});

  checks.push_back({{"smooth_dmax_nonincreasing_in_eps", "smooth_dmin_nondecreasing_in_eps"}, 1e-5, 0,
                    [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng), sigma = random_density(d, rng);
    const double e1 = rng.uniform(0.01, 0.3), e2 = e1 + rng.uniform(0.01, 0.3);
    return std::vector<double>{
        excess(smooth_dmax_exact(rho, sigma, e2).value_bits, smooth_dmax_exact(rho, sigma, e1).value_bits),
        excess(smooth_dmin_lower(rho, sigma, e1).value_bits, smooth_dmin_lower(rho, sigma, e2).value_bits)};
  }});

  // Any rhobar in the ball keeps Tr(P rho) >= 1 - eps on its support
  // projector P, so D_min(rhobar || sigma) <= D_max(rho || sigma) - log2(1 - eps).
  checks.push_back({{"smooth_values_below_dmax"}, 1e-8, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng), sigma = random_density(d, rng);
    const double eps = rng.uniform(0.0, 0.5);
    const double dmax = bits(d_max(rho, sigma));
    return std::vector<double>{std::max(excess(smooth_dmin_lower(rho, sigma, eps).value_bits, dmax - std::log2(1.0 - eps)),
                                        excess(smooth_dmax_exact(rho, sigma, eps).value_bits, dmax))};
  }});

  checks.push_back({{"smoothing_certificate_holds"}, 1e-7, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng), sigma = random_density(d, rng);
    const double lambda = bits(d_max(rho, sigma)) - rng.uniform(0.0, 3.0);
    try {
      const SmoothingCertificate cert = smoothing_certificate(rho, sigma, lambda);
      const double dominance = excess(bits(d_max_matrix(cert.smoothed.matrix(), sigma.matrix())), lambda);
      const double distance = std::max(0.0, cert.transform_trace_dist - cert.epsilon_used);
      return std::vector<double>{std::max(dominance, distance)};
    } catch (const ConsistencyError&) {
      return std::vector<double>{inf};
    }
  }});

  checks.push_back({{"tail_condition_at_returned_lambda"}, 1e-7, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = pick_dim(rng, c);
    const DensityOperator rho = any_rank_state(d, rng), sigma = random_density(d, rng);
    const double eps = rng.uniform(0.01, 0.5);
    const SmoothDmaxUpper up = smooth_dmax_upper(rho, sigma, eps);
    if (!std::isfinite(up.value_bits)) return std::vector<double>{inf};
    return std::vector<double>{std::max(0.0, tail_epsilon(rho.matrix(), sigma.matrix(), up.value_bits) - eps)};
  }});

  checks.push_back({{"classical_smoothing_matches_scan"}, 2e-3, 0, [](Rng& rng, const SuiteConfig& c) {
    const Eigen::Index d = std::min<Eigen::Index>(pick_dim(rng, c), 8);
    const std::vector<double> p = diag_weights(d, rng), q = diag_weights(d, rng);
    const double eps = rng.uniform(0.01, 0.3);
    const double exact =
        smooth_dmax_exact(DensityOperator::diagonal(p), DensityOperator::diagonal(q), eps).value_bits;
    return std::vector<double>{difference(exact, scan_smooth_dmax(p, q, eps))};
  }});

  // ---- entanglement ----
  checks.push_back({{"monotone_condition_nonnegative", "monotone_condition_zero_on_equal_states",
                     "monotone_condition_positive_on_distinct_states", "monotone_condition_unitary_invariance",
                     "monotone_condition_partial_trace", "monotone_condition_instrument_unnormalized_sum",
                     "monotone_condition_instrument_total", "monotone_condition_block_diagonal_max",
                     "monotone_condition_projector_tensor"},
                    1e-8, 0, [](Rng& rng, const SuiteConfig&) {
    const Dims d = rng.integer(0, 2) == 0 ? Dims{3, 2} : small_bipartite(rng);
    const BipartiteState rho(any_rank_state(d.total(), rng), d);
    const MonotoneReport r = monotone_condition_suite(rho, rng.split(std::uint64_t(0)).seed());
    std::vector<double> out;
    for (const auto& check : r.checks) out.push_back(check.violation);
    return out;
  }});

  checks.push_back({{"emax_zero_on_separable"}, 1e-3, 6, [](Rng& rng, const SuiteConfig&) {
    const Dims d = small_bipartite(rng);
    const int k = rng.integer(1, int(2 * d.total()));
    std::vector<SeparableTerm> terms;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      terms.push_back({rng.uniform(0.05, 1.0), random_unit_vector(d.a, rng), random_unit_vector(d.b, rng)});
      total += terms.back().weight;
    }
    for (auto& t : terms) t.weight /= total;
    const SeparableEnsemble ens(std::move(terms), d);
    const BipartiteState rho(ens.state(), d);
    EmaxConfig cfg;
    cfg.restarts = 2;
    cfg.seed = rng.split(std::uint64_t(1)).seed();
    const EmaxResult e = emax(rho, cfg);
    return std::vector<double>{std::max({0.0, e.upper_bits, e.lower_bits})};
  }});

  checks.push_back({{"ppt_bound_below_emax", "emax_above_relative_entropy_of_entanglement",
                     "emax_local_unitary_invariance", "ppt_bound_local_unitary_invariance",
                     "emax_nonincreasing_under_local_channels"},
                    -1.0, 4, [](Rng& rng, const SuiteConfig&) {
    const Dims d = small_bipartite(rng);
    const BipartiteState rho(any_rank_state(d.total(), rng), d);
    EmaxConfig cfg;
    cfg.restarts = 2;
    cfg.seed = rng.split(std::uint64_t(1)).seed();
    const EmaxResult e = emax(rho, cfg);
    const double er = rel_ent_entanglement(rho, cfg, &e.witness);

    const Matrix u = local_unitary(d, rng);
    const BipartiteState rotated(DensityOperator::trusted(u * rho.state().matrix() * u.adjoint()), d);
    const EmaxResult er_rot = emax(rotated, cfg);

    const auto ca = channel_between(d.a, d.a, rng);
    const auto cb = channel_between(d.b, d.b, rng);
    const BipartiteState mapped(apply_channel(tensor(ca, cb), rho.state()), d);
    const EmaxResult e_map = emax(mapped, cfg);

    return std::vector<double>{excess(e.lower_bits, e.upper_bits), excess(er, e.upper_bits),
                               difference(er_rot.upper_bits, e.upper_bits),
                               difference(er_rot.lower_bits, e.lower_bits), excess(e_map.upper_bits, e.upper_bits)};
  }});

  // ---- spectral ----
  checks.push_back({{"spectral_sandwich_exact_path"}, 1e-6, 0, [](Rng& rng, const SuiteConfig&) {
    const Eigen::Index d = rng.integer(2, 3);
    const IIDPair pair(DensityOperator::diagonal(diag_weights(d, rng)), DensityOperator::diagonal(diag_weights(d, rng)));
    const RatePoint pt = rate_curve(pair, 1e-4, {rng.integer(1, 4)}).front();
    return std::vector<double>{std::max(excess(pt.dmin_over_n, pt.rel_entropy), excess(pt.rel_entropy, pt.dmax_over_n))};
  }});

  checks.push_back({{"spectral_sandwich_solver_path"}, 1e-3, 0, [](Rng& rng, const SuiteConfig&) {
    const IIDPair pair(random_density(2, rng), random_density(2, rng));
    const RatePoint pt = rate_curve(pair, 1e-4, {rng.integer(1, 2)}, RateMethod::Dense).front();
    return std::vector<double>{std::max(excess(pt.dmin_over_n, pt.rel_entropy), excess(pt.rel_entropy, pt.dmax_over_n))};
  }});

  checks.push_back({{"relative_entropy_additive_on_tensor_powers"}, 1e-8, 0, [](Rng& rng, const SuiteConfig&) {
    const Eigen::Index d = rng.integer(2, 3);
    const int n = rng.integer(1, 4);
    const DensityOperator rho = random_density(d, rng), sigma = random_density(d, rng);
    const double s = bits(relative_entropy(rho, sigma));
    const double sn = bits(relative_entropy(tensor_power(rho, n), tensor_power(sigma, n)));
    return std::vector<double>{difference(sn, n * s) / n};
  }});

  checks.push_back({{"sigma_tail_bound"}, 0.0, 0, [](Rng& rng, const SuiteConfig&) {
    const Eigen::Index d = rng.integer(2, 4);
    const bool classical = rng.integer(0, 1) == 0;
    const IIDPair pair = classical ? IIDPair(DensityOperator::diagonal(diag_weights(d, rng)),
                                             DensityOperator::diagonal(diag_weights(d, rng)))
                                   : IIDPair(any_rank_state(d, rng), random_density(d, rng));
    const int n = classical ? rng.integer(1, 6) : rng.integer(1, 2);
    const SigmaTailCheck t = sigma_tail_check(pair, n, rng.uniform(-1.0, 2.0));
    return std::vector<double>{std::max(0.0, t.lhs - t.bound - 1e-9)};
  }});

  checks.push_back({{"spectral_paths_agree"}, 1e-8, 30, [](Rng& rng, const SuiteConfig&) {
    const IIDPair pair(DensityOperator::diagonal(diag_weights(2, rng)), DensityOperator::diagonal(diag_weights(2, rng)));
    const int n = rng.integer(1, 10);
    const double gamma = rng.uniform(-1.5, 1.5);
    return std::vector<double>{difference(spectral_trace_dense(pair, n, gamma), spectral_trace_classical(pair, n, gamma))};
  }});

  // The same bound per copy: D_min^eps(rho_n || sigma_n) / n <= D_max(rho || sigma) - log2(1 - eps) / n.
  checks.push_back({{"rate_curve_dmin_bounded"}, 1e-8, 0, [](Rng& rng, const SuiteConfig&) {
    const Eigen::Index d = rng.integer(2, 3);
    const IIDPair pair(DensityOperator::diagonal(diag_weights(d, rng)), DensityOperator::diagonal(diag_weights(d, rng)));
    const double eps = rng.uniform(0.01, 0.2);
    const int n = rng.integer(1, 6);
    const RateEstimate est = divergence_rate_estimate(pair, eps, n);
    const double dmax = bits(d_max(pair.rho(), pair.sigma()));
    return std::vector<double>{excess(est.inf_est, dmax - std::log2(1.0 - eps) / n)};
  }});

  checks.push_back({{"rate_trend_on_benchmark_pair"}, 0.0, 1, [](Rng&, const SuiteConfig&) {
    const IIDPair pair(DensityOperator::diagonal({0.75, 0.25}), DensityOperator::diagonal({0.5, 0.5}));
    const auto curve = rate_curve(pair, 0.05, {1, 10});
    const double first = std::abs(curve[0].dmax_over_n - curve[0].rel_entropy);
    const double last = std::abs(curve[1].dmax_over_n - curve[1].rel_entropy);
    // Strict decrease: a tie counts as a violation.
    return std::vector<double>{last < first ? 0.0 : std::max(last - first, std::numeric_limits<double>::min())};
  }});

  return checks;
}

// Default tolerances of the five-check entanglement group, in name order.
double group_tolerance(const std::string& name) {
  if (name == "ppt_bound_below_emax") return 1e-7;
  if (name == "emax_above_relative_entropy_of_entanglement") return 1e-3;
  if (name == "ppt_bound_local_unitary_invariance") return 1e-4;
  return 2e-2;
}

}  // namespace

void SuiteConfig::validate() const {
  if (trials < 1) throw ValidationError("suite: trials must be at least 1");
  if (dims.empty()) throw ValidationError("suite: dims must be nonempty");
  for (int d : dims)
    if (d < 2 || d > 16) throw ValidationError("suite: every dim must lie in [2, 16]");
  for (const auto& [name, tol] : tolerance)
    if (!(tol >= 0.0)) throw ValidationError("suite: tolerance for " + name + " must be nonnegative");
  const auto names = suite_check_names();
  for (const auto& n : only)
    if (!std::binary_search(names.begin(), names.end(), n)) throw ValidationError("suite: unknown check " + n);
  for (const auto& [name, tol] : tolerance)
    if (name != "*" && !std::binary_search(names.begin(), names.end(), name))
      throw ValidationError("suite: tolerance given for unknown check " + name);
}

std::vector<std::string> suite_check_names() {
  std::vector<std::string> names;
  for (const auto& c : all_checks()) names.insert(names.end(), c.names.begin(), c.names.end());
  std::sort(names.begin(), names.end());
  return names;
}

SuiteReport run_suite(const SuiteConfig& config) {
  config.validate();
  const Rng root(config.seed);
  std::vector<CheckResult> results;
  for (const Check& check : all_checks()) {
    const bool wanted = config.only.empty() || std::any_of(check.names.begin(), check.names.end(), [&](const auto& n) {
                          return std::find(config.only.begin(), config.only.end(), n) != config.only.end();
                        });
    if (!wanted) continue;
    std::vector<CheckResult> group;
    for (const auto& name : check.names) {
      double tol = check.tolerance >= 0.0 ? check.tolerance : group_tolerance(name);
      if (auto it = config.tolerance.find("*"); it != config.tolerance.end()) tol = it->second;
      if (auto it = config.tolerance.find(name); it != config.tolerance.end()) tol = it->second;
      group.push_back({name, 0, 0, 0.0, tol});
    }
    const int trials = check.cap > 0 ? std::min(check.cap, config.trials) : config.trials;
    const Rng stream = root.split(check.names.front());
    for (int t = 0; t < trials; ++t) {
      Rng rng = stream.split(std::uint64_t(t));
      std::vector<double> violations;
      try {
        violations = check.trial(rng, config);
      } catch (const std::exception&) {
        // A solver or consistency failure on a valid instance is a failed trial.
        violations.assign(group.size(), inf);
      }
      for (std::size_t i = 0; i < group.size(); ++i) {
        const double v = i < violations.size() ? violations[i] : inf;
        ++group[i].trials;
        if (!(v <= group[i].tolerance)) ++group[i].failures;
        group[i].worst_violation = std::max(group[i].worst_violation, std::isnan(v) ? inf : v);
      }
    }
    for (auto& r : group)
      if (config.only.empty() || std::find(config.only.begin(), config.only.end(), r.name) != config.only.end())
        results.push_back(std::move(r));
  }
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  SuiteReport report{std::move(results), true};
  for (const auto& r : report.checks) report.pass = report.pass && r.failures == 0;
  return report;
}

Json SuiteReport::to_json() const {
  Json j;
  j["pass"] = pass;
  j["checks"] = Json::array();
  for (const auto& c : checks) {
    Json e;
    e["name"] = c.name;
    e["trials"] = c.trials;
    e["failures"] = c.failures;
    e["tolerance"] = c.tolerance;
    if (std::isfinite(c.worst_violation)) e["worst_violation"] = c.worst_violation;
    else e["worst_violation"] = "inf";
    j["checks"].push_back(std::move(e));
  }
  return j;
}

}  // namespace qdiv
