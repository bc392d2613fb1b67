#include "oracles.hpp"

#include <qdiv/random.hpp>
#include <qdiv/smoothing.hpp>

#include <doctest.h>

using namespace qdiv;

namespace {

DensityOperator diag(std::vector<double> w) { return DensityOperator::diagonal(w); }

std::vector<double> random_weights(std::size_t n, Rng& rng, bool allow_zero) {
  std::vector<double> w(n);
  double s = 0;
  for (auto& x : w) {
    x = rng.uniform(0.05, 1.0);
    if (allow_zero && rng.uniform() < 0.2) x = 0.0;
    s += x;
  }
  if (s == 0) w[0] = s = 1.0;
  for (auto& x : w) x /= s;
  return w;
}

}  // namespace

TEST_SUITE("smoothing") {

TEST_CASE("certificate without smoothing is the identity on the support") {
  Rng rng(1);
  const auto r = random_density(3, rng), s = random_density(3, rng);
  const double dm = d_max(r, s).bits;
  const auto c = smoothing_certificate(r, s, dm + 0.1);
  CHECK(c.delta.norm() <= 1e-9);
  CHECK((c.smoothed.matrix() - r.matrix()).norm() <= 1e-9);
}

TEST_CASE("certificate on the diagonal example") {
  const auto r = diag({0.9, 0.1}), s = diag({0.5, 0.5});
  const double lambda = std::log2(1.4);
  const auto c = smoothing_certificate(r, s, lambda);
  // Delta = (rho - 0.7 I)_+ = diag(0.2, 0).
  CHECK((c.delta - oracle::diag({0.2, 0})).norm() <= 1e-12);
  CHECK(d_max(c.smoothed, s).bits <= lambda + 1e-9);
  CHECK(c.transform_trace_dist <= std::sqrt(1.6) + 1e-12);
  CHECK(c.epsilon_used == doctest::Approx(std::sqrt(1.6)));
}

TEST_CASE("certificate inequalities on random pairs") {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto r = random_density(4, rng), s = random_density(4, rng);
    const double lambda = d_max(r, s).bits - 0.3;
    const auto c = smoothing_certificate(r, s, lambda);
    CHECK(d_max(c.smoothed, s).bits <= lambda + 1e-7);
    CHECK(trace_distance<double>(c.smoothed, r) <= c.epsilon_used + 1e-7);
    CHECK(c.smoothed.trace() <= r.trace() + 1e-9);
  }
}

TEST_CASE("tail-condition upper bound") {
  const auto r = diag({0.9, 0.1}), s = diag({0.5, 0.5});
  CHECK(smooth_dmax_upper(r, s, 1e-9).value_bits == doctest::Approx(d_max(r, s).bits).epsilon(1e-5));
  CHECK(smooth_dmax_upper(r, s, 0.2).value_bits >= std::log2(1.4) - 1e-9);

  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_density(3, rng), b = random_density(3, rng);
    double last = oracle::inf;
    for (double eps : {0.05, 0.1, 0.3, 0.6}) {
      const auto u = smooth_dmax_upper(a, b, eps);
      CHECK(u.value_bits <= last + 1e-9);
      last = u.value_bits;
      // Tail condition at the returned lambda.
      CHECK(tail_epsilon(a.matrix(), b.matrix(), u.value_bits) <= eps + 1e-7);
    }
  }
}

TEST_CASE("exact smooth max-relative entropy") {
  const auto r = diag({0.9, 0.1}), s = diag({0.5, 0.5});
  CHECK(smooth_dmax_exact(r, s, 0.0).value_bits == doctest::Approx(d_max(r, s).bits).epsilon(1e-6));
  const double oracle_value = oracle::smooth_dmax_budget({0.9, 0.1}, {0.5, 0.5}, 0.2);
  CHECK(oracle_value == doctest::Approx(std::log2(1.4)).epsilon(1e-12));
  CHECK(std::abs(smooth_dmax_exact(r, s, 0.2).value_bits - oracle_value) <= 1e-3);

  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    const auto a = random_density(3, rng), b = random_density(3, rng);
    const auto e = smooth_dmax_exact(a, b, 0.1);
    CHECK(e.value_bits <= smooth_dmax_upper(a, b, 0.1).value_bits + 1e-4);
    CHECK(e.lower_bits <= e.value_bits + 1e-12);
    // The witness is in the ball and dominated.
    CHECK(EpsilonBall{a, 0.1}.contains(e.witness));
    CHECK(d_max(HermitianOperator(e.witness), b).bits <= e.value_bits + 1e-6);
  }
}

TEST_CASE("exact solver against brute force on diagonal balls") {
  Rng rng(5);
  for (int t = 0; t < 6; ++t) {
    const auto p = random_weights(2, rng, false), q = random_weights(2, rng, false);
    const double eps = rng.uniform(0.02, 0.3);
    const double brute = oracle::smooth_dmax_grid2(p, q, eps, 2000);
    CHECK(std::abs(smooth_dmax_exact(diag(p), diag(q), eps).value_bits - brute) <= 2e-3);
    CHECK(std::abs(smooth_dmax_exact_classical(p, q, eps) - brute) <= 2e-3);
  }
  for (int t = 0; t < 20; ++t) {
    const auto p = random_weights(6, rng, true), q = random_weights(6, rng, false);
    const double eps = rng.uniform(0.01, 0.5);
    CHECK(smooth_dmax_exact_classical(p, q, eps) == doctest::Approx(oracle::smooth_dmax_budget(p, q, eps)).epsilon(1e-9));
  }
}

TEST_CASE("projector sweep lower bound") {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_density(3, 2, rng), b = random_density(3, rng);
    CHECK(smooth_dmin_lower(a, b, 2.5).value_bits >= d_min(a, b).bits - 1e-12);
  }
  const auto l = smooth_dmin_lower(diag({0.9, 0.1}), diag({0.5, 0.5}), 0.75);
  CHECK(l.value_bits == doctest::Approx(1.0));
  CHECK(l.delta == doctest::Approx(0.1));

  for (int t = 0; t < 20; ++t) {
    const auto p = random_weights(4, rng, true), q = random_weights(4, rng, false);
    const double eps = rng.uniform(0.05, 0.9);
    CHECK(smooth_dmin_lower(diag(p), diag(q), eps).value_bits <= smooth_dmin_exact_classical(p, q, eps) + 1e-9);
  }
}

TEST_CASE("exact smooth min-relative entropy by enumeration") {
  CHECK(smooth_dmin_exact_classical({0.9, 0.1}, {0.5, 0.5}, 0.0) == doctest::Approx(0.0).scale(1));
  CHECK(smooth_dmin_exact_classical({0.9, 0.1, 0}, {0.3, 0.3, 0.4}, 0.0) == doctest::Approx(-std::log2(0.6)));
  CHECK(smooth_dmin_exact_classical({0.9, 0.1}, {0.5, 0.5}, 0.25) == 1.0);
  CHECK(smooth_dmin_exact_classical({0.5, 0.3, 0.2}, {0.1, 0.45, 0.45}, 0.5) == doctest::Approx(-std::log2(0.1)));
  Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    const auto p = random_weights(5, rng, true), q = random_weights(5, rng, false);
    const double eps = rng.uniform(0.0, 0.8);
    CHECK(smooth_dmin_exact_classical(p, q, eps) == doctest::Approx(oracle::smooth_dmin_subsets(p, q, eps)));
    CHECK(smooth_dmin_classical_greedy(classical_outcomes(p, q), eps) <= smooth_dmin_exact_classical(p, q, eps) + 1e-9);
  }
}

TEST_CASE("smoothed min can exceed unsmoothed max by at most -log2(1 - eps)") {
  // D_min^eps <= D_max^0 fails: p = (0.9, 0.1), q = (0.5, 0.5), eps = 0.15
  // drops the second outcome, so D_min^eps = 1 > log2 1.8.
  const std::vector<double> p{0.9, 0.1}, q{0.5, 0.5};
  const double dmin_eps = smooth_dmin_exact_classical(p, q, 0.15);
  const double dmax = oracle::max_ratio_bits(p, q);
  CHECK(dmin_eps == doctest::Approx(1.0));
  CHECK(dmin_eps > dmax);
  CHECK(dmin_eps <= dmax - std::log2(1 - 0.15));

  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_weights(4, rng, true), b = random_weights(4, rng, false);
    const double eps = rng.uniform(0.01, 0.9);
    CHECK(smooth_dmin_exact_classical(a, b, eps) <= oracle::max_ratio_bits(a, b) - std::log2(1 - eps) + 1e-9);
  }
}

TEST_CASE("ball membership") {
  const auto r = diag({0.6, 0.4});
  const EpsilonBall ball{r, 0.2};
  CHECK(ball.contains(oracle::diag({0.5, 0.4})));
  CHECK_FALSE(ball.contains(oracle::diag({0.3, 0.4})));
  CHECK_FALSE(ball.contains(oracle::diag({0.7, 0.35})));  // trace grows
}

TEST_CASE("invalid smoothing parameters") {
  const auto r = diag({0.6, 0.4});
  CHECK_THROWS_AS(smooth_dmax_upper(r, r, 0.0), ValidationError);
  CHECK_THROWS_AS(smooth_dmin_lower(r, r, -0.1), ValidationError);
  CHECK_THROWS_AS(smoothing_certificate(r, r, oracle::inf), ValidationError);
}

}  // TEST_SUITE
