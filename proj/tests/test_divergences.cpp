#include "oracles.hpp"

#include <qdiv/divergences.hpp>
#include <qdiv/random.hpp>

#include <doctest.h>

using namespace qdiv;

namespace {

DensityOperator diag(std::vector<double> w) { return DensityOperator::diagonal(w); }
const std::vector<double> P{0.75, 0.25}, Q{0.5, 0.5};

DensityOperator bell() { return DensityOperator::pure(oracle::max_entangled(2)); }

}  // namespace

TEST_SUITE("divergences") {

TEST_CASE("max-relative entropy") {
  Rng rng(1);
  const DensityOperator r = random_density(3, rng);
  CHECK(d_max(r, r).bits == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(d_max(diag(P), diag(Q)).bits == doctest::Approx(oracle::max_ratio_bits(P, Q)));
  CHECK(d_max(diag({1, 0}), DensityOperator::maximally_mixed(2)).bits == doctest::Approx(1.0));
  CHECK_FALSE(d_max(DensityOperator::maximally_mixed(2), diag({1, 0})).finite);

  // Generalized eigenvalue oracle on random full-rank pairs.
  for (int t = 0; t < 20; ++t) {
    const auto a = random_density(4, rng), b = random_density(4, rng);
    CHECK(d_max(a, b).bits == doctest::Approx(oracle::dense_dmax_bits(a.matrix(), b.matrix())).epsilon(1e-9));
  }
}

TEST_CASE("min-relative entropy") {
  Rng rng(2);
  CHECK(d_min(random_density(3, rng), random_density(3, rng)).bits == doctest::Approx(0.0).scale(1));
  CHECK(d_min(diag({1, 0}), DensityOperator::maximally_mixed(2)).bits == doctest::Approx(1.0));
  CHECK(d_min(diag({0.9, 0.1, 0}), DensityOperator::maximally_mixed(3)).bits ==
        doctest::Approx(oracle::overlap_bits({0.9, 0.1, 0}, {1. / 3, 1. / 3, 1. / 3})));
  CHECK_FALSE(d_min(diag({1, 0}), diag({0, 1})).finite);
}

TEST_CASE("relative and Renyi entropies") {
  CHECK(relative_entropy(diag(P), diag(P)).bits == doctest::Approx(0.0));
  CHECK(relative_entropy(diag(P), diag(Q)).bits == doctest::Approx(oracle::kl_bits(P, Q)));
  CHECK(relative_entropy(diag({1, 0}), DensityOperator::maximally_mixed(2)).bits == doctest::Approx(1.0));
  CHECK_FALSE(relative_entropy(DensityOperator::maximally_mixed(2), diag({1, 0})).finite);

  for (double a : {0.1, 0.5, 0.9}) CHECK(renyi_relative(diag(P), diag(P), a).bits == doctest::Approx(0.0).scale(1));
  CHECK(renyi_relative(diag(P), diag(Q), 0.5).bits == doctest::Approx(oracle::renyi_bits(P, Q, 0.5)).epsilon(1e-12));
  CHECK(renyi_relative(diag(P), diag(Q), 0.5).bits == doctest::Approx(-2 * std::log2(std::sqrt(3. / 8) + std::sqrt(1. / 8))));
  CHECK_THROWS_AS(renyi_relative(diag(P), diag(Q), 1.5), ValidationError);

  // Small alpha approaches d_min, and the gap shrinks with alpha.
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto r = random_density(4, 2, rng), s = random_density(4, rng);
    const double dm = d_min(r, s).bits;
    double last = oracle::inf;
    for (double a : {1e-2, 1e-3, 1e-4}) {
      const double gap = std::abs(renyi_relative(r, s, a).bits - dm);
      CHECK(gap <= last + 1e-12);
      last = gap;
    }
    CHECK(last <= 1e-3);
  }
}

TEST_CASE("Chernoff exponent") {
  CHECK(chernoff_bound(diag(P), diag(P)).bits == doctest::Approx(0.0).scale(1));
  const double oracle_value = oracle::chernoff_grid(P, Q, 100000);
  CHECK(chernoff_bound(diag(P), diag(Q)).bits == doctest::Approx(oracle_value).epsilon(1e-6));
  CHECK(std::abs(oracle_value - 0.0500) <= 5e-4);
  Rng rng(4);
  for (int t = 0; t < 30; ++t) {
    const auto r = random_density(3, rng.integer(1, 3), rng), s = random_density(3, rng.integer(1, 3), rng);
    const auto c = chernoff_bound(r, s), m = d_min(r, s);
    if (c.finite && m.finite) CHECK(c.bits >= m.bits - 1e-9);
  }
}

TEST_CASE("three forms of D_max agree") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index d = rng.integer(2, 6);
    const auto f = d_max_forms(random_density(d, rng), random_density(d, rng));
    CHECK(f.max_disagreement() <= 1e-8);
  }
}

TEST_CASE("entropies") {
  CHECK(h_min(DensityOperator::maximally_mixed(4)) == doctest::Approx(2.0));
  CHECK(h_max(DensityOperator::maximally_mixed(4)) == doctest::Approx(2.0));
  CHECK(h_min(diag({1, 0})) == doctest::Approx(0.0).scale(1));
  CHECK(h_max(diag({1, 0})) == doctest::Approx(0.0).scale(1));
  CHECK(h_min(diag(P)) == doctest::Approx(-std::log2(0.75)));
  CHECK(h_max(diag(P)) == doctest::Approx(1.0));
}

TEST_CASE("conditional entropies") {
  Rng rng(6);
  const DensityOperator sb = random_density(3, rng);
  const BipartiteState prod(tensor(DensityOperator::maximally_mixed(2), sb), Dims{2, 3});
  CHECK(h_min_cond(prod, sb) == doctest::Approx(1.0));

  const BipartiteState b(bell(), Dims{2, 2});
  CHECK(h_min_cond(b, DensityOperator::maximally_mixed(2)) == doctest::Approx(-1.0));

  for (int t = 0; t < 20; ++t) {
    const BipartiteState r(random_density(6, rng.integer(1, 6), rng), Dims{2, 3});
    const DensityOperator s = random_density(3, rng);
    CHECK(h_min_cond(r, s) <= h_max_cond(r, s) + 1e-9);
  }
}

TEST_CASE("mutual informations") {
  Rng rng(7);
  const BipartiteState prod(tensor(random_density(2, rng), random_density(2, rng)), Dims{2, 2});
  CHECK(mutual_max(prod).bits == doctest::Approx(0.0).scale(1));
  CHECK(mutual_min(prod).bits == doctest::Approx(0.0).scale(1));

  // Bell against I/4: top eigenvalue of 4 Phi is 4.
  const BipartiteState b(bell(), Dims{2, 2});
  CHECK(mutual_max(b).bits == doctest::Approx(2.0));
  for (int t = 0; t < 20; ++t) {
    const BipartiteState r(random_density(4, rng.integer(1, 4), rng), Dims{2, 2});
    CHECK(mutual_min(r) <= DivergenceValue::of(mutual_max(r).bits + 1e-9));
  }
}

TEST_CASE("Helstrom error") {
  Rng rng(8);
  const auto r = random_density(3, rng);
  CHECK(helstrom_min_error(r, r) == doctest::Approx(0.5));
  CHECK(helstrom_min_error(diag({1, 0}), diag({0, 1})) == doctest::Approx(0.0).scale(1));
  CHECK(helstrom_min_error(diag({0.9, 0.1}), diag({0.5, 0.5})) == doctest::Approx(0.5 * (1 - 0.4)));
}

TEST_CASE("sandwich in the report") {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto rep = divergence_report(random_density(4, rng.integer(1, 4), rng), random_density(4, rng));
    CHECK(rep.sandwich_ok);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  CHECK_THROWS_AS(d_max(diag(P), DensityOperator::maximally_mixed(3)), ValidationError);
}

}  // TEST_SUITE
