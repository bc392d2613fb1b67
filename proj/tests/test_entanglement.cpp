#include "oracles.hpp"

#include <qdiv/entanglement.hpp>
#include <qdiv/random.hpp>

#include <doctest.h>

using namespace qdiv;

namespace {

const Dims kQubits{2, 2};

// F |Phi><Phi| + (1 - F) (I - |Phi><Phi|) / (d^2 - 1).
BipartiteState isotropic(int d, double fidelity) {
  const Eigen::VectorXcd phi = oracle::max_entangled(d);
  const Matrix proj = phi * phi.adjoint();
  const Matrix m = fidelity * proj + (1 - fidelity) * (Matrix::Identity(d * d, d * d) - proj) / double(d * d - 1);
  return BipartiteState(DensityOperator(m), Dims{d, d});
}

BipartiteState bell() { return BipartiteState(DensityOperator::pure(oracle::max_entangled(2)), kQubits); }

SeparableEnsemble random_ensemble(Dims d, int k, Rng& rng) {
  std::vector<SeparableTerm> terms;
  double total = 0;
  for (int i = 0; i < k; ++i) {
    terms.push_back({rng.uniform(0.05, 1.0), random_unit_vector(d.a, rng), random_unit_vector(d.b, rng)});
    total += terms.back().weight;
  }
  for (auto& t : terms) t.weight /= total;
  return SeparableEnsemble(std::move(terms), d);
}

EmaxConfig quick(std::uint64_t seed = 42) {
  EmaxConfig c;
  c.restarts = 2;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("entanglement") {

TEST_CASE("partial transpose") {
  Rng rng(1);
  const BipartiteState prod(tensor(random_density(2, rng), random_density(3, rng)), Dims{2, 3});
  CHECK(oracle::eigenvalues(partial_transpose(prod, Subsystem::B).matrix()).minCoeff() >= -1e-12);
  CHECK(oracle::eigenvalues(partial_transpose(bell(), Subsystem::B).matrix()).minCoeff() == doctest::Approx(-0.5));

  const BipartiteState r(random_density(6, rng), Dims{2, 3});
  const BipartiteState once(DensityOperator::trusted(partial_transpose(r, Subsystem::A).matrix()), Dims{2, 3});
  CHECK((partial_transpose(once, Subsystem::A).matrix() - r.state().matrix()).norm() <= 1e-12);
  CHECK(partial_transpose(r, Subsystem::B).trace() == doctest::Approx(1.0));
}

TEST_CASE("PPT test") {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto e = random_ensemble(Dims{2, 3}, rng.integer(1, 8), rng);
    CHECK(is_ppt(BipartiteState(e.state(), e.dims())));
  }
  CHECK_FALSE(is_ppt(bell()));
  // Isotropic two-qubit state v Phi + (1 - v) I/4: the partial transpose has
  // smallest eigenvalue (1 - 3v)/4, zero at v = 1/3.
  const double v = 1.0 / 3;
  const Eigen::VectorXcd phi = oracle::max_entangled(2);
  const Matrix m = v * phi * phi.adjoint() + (1 - v) * Matrix::Identity(4, 4) / 4.0;
  const BipartiteState boundary(DensityOperator(m), kQubits);
  CHECK(oracle::eigenvalues(partial_transpose(boundary, Subsystem::B).matrix()).minCoeff() ==
        doctest::Approx((1 - 3 * v) / 4).scale(1));
  CHECK(is_ppt(boundary));
  const Matrix m2 = 0.34 * phi * phi.adjoint() + 0.66 * Matrix::Identity(4, 4) / 4.0;
  CHECK_FALSE(is_ppt(BipartiteState(DensityOperator(m2), kQubits)));
}

TEST_CASE("separable ensembles validate their terms") {
  Rng rng(3);
  const Vector a = random_unit_vector(2, rng), b = random_unit_vector(2, rng);
  CHECK_THROWS_AS(SeparableEnsemble({{0.7, a, b}}, kQubits), ValidationError);
  CHECK_THROWS_AS(SeparableEnsemble({{1.0, Vector(2 * a), b}}, kQubits), ValidationError);
  CHECK_THROWS_AS(SeparableEnsemble({{1.0, a, random_unit_vector(3, rng)}}, kQubits), ValidationError);
  const SeparableEnsemble ok({{0.4, a, b}, {0.6, b, a}}, kQubits);
  CHECK(ok.state().trace() == doctest::Approx(1.0));
}

TEST_CASE("E_max of the Bell state") {
  // Any PPT sigma has <Phi|sigma|Phi> <= 1/2, so rho <= t sigma needs t >= 2;
  // the isotropic state at F = 1/2 reaches t = 2.
  const BipartiteState half = isotropic(2, 0.5);
  const Matrix slack = 2.0 * half.state().matrix() - bell().state().matrix();
  CHECK(oracle::eigenvalues(slack).minCoeff() >= -1e-12);

  const EmaxResult r = emax(bell(), quick());
  CHECK(r.upper_bits == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(r.lower_bits == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(r.gap <= 1e-2);
  CHECK(r.lower_bits <= r.upper_bits + 1e-6);
  CHECK(r.upper_bits == doctest::Approx(d_max(bell().state(), r.witness.state()).bits).epsilon(1e-8));
  CHECK(ppt_emax_lower(bell()) >= 0.99);
}

TEST_CASE("E_max of isotropic states is log2(d F)") {
  // rho <= d F sigma for sigma isotropic at F = 1/d, and <Phi|sigma|Phi> <= 1/d
  // for PPT sigma gives the matching lower bound.
  for (double f : {0.6, 0.8, 0.95}) {
    const BipartiteState rho = isotropic(2, f);
    const EmaxResult r = emax(rho, quick());
    CHECK(r.upper_bits == doctest::Approx(std::log2(2 * f)).epsilon(1e-3));
    CHECK(r.lower_bits == doctest::Approx(std::log2(2 * f)).epsilon(1e-3));
  }
}

TEST_CASE("PPT bound decreases with white noise") {
  double last = oracle::inf;
  for (double w : {0.0, 0.2, 0.4, 0.6}) {
    const Eigen::VectorXcd phi = oracle::max_entangled(2);
    const Matrix m = (1 - w) * phi * phi.adjoint() + w * Matrix::Identity(4, 4) / 4.0;
    const double v = ppt_emax_lower(BipartiteState(DensityOperator(m), kQubits));
    CHECK(v <= last + 1e-6);
    last = v;
  }
}

TEST_CASE("separable and product inputs have zero E_max") {
  Rng rng(4);
  const BipartiteState prod(tensor(DensityOperator::pure(random_unit_vector(2, rng)),
                                   DensityOperator::pure(random_unit_vector(2, rng))),
                            kQubits);
  const EmaxResult r = emax(prod, quick());
  CHECK(r.upper_bits <= 1e-3);
  CHECK(r.lower_bits >= -1e-6);
  CHECK(ppt_emax_lower(prod) <= 1e-3);
  CHECK(rel_ent_entanglement(prod, quick()) <= 1e-3);

  for (int t = 0; t < 3; ++t) {
    const auto e = random_ensemble(Dims{2, 3}, rng.integer(1, 8), rng);
    const BipartiteState s(e.state(), e.dims());
    CHECK(emax(s, quick(t)).upper_bits <= 1e-3);
    CHECK(ppt_emax_lower(s) <= 1e-3);
  }
}

TEST_CASE("relative entropy of entanglement") {
  // For pure states it equals the entropy of the Schmidt coefficients.
  CHECK(rel_ent_entanglement(bell(), quick()) == doctest::Approx(1.0).epsilon(1e-2));
  Rng rng(5);
  for (int t = 0; t < 3; ++t) {
    const BipartiteState rho(random_density(4, rng), kQubits);
    const EmaxResult e = emax(rho, quick(t));
    CHECK(e.lower_bits <= e.upper_bits + 1e-6);
    CHECK(rel_ent_entanglement(rho, quick(t), &e.witness) <= e.upper_bits + 1e-3);
  }
}

TEST_CASE("witness reassembles to the reported upper bound") {
  Rng rng(6);
  const BipartiteState rho(random_density(6, 3, rng), Dims{2, 3});
  const EmaxResult r = emax(rho, quick());
  CHECK(r.upper_bits == doctest::Approx(d_max(rho.state(), r.witness.state()).bits).epsilon(1e-8));
  CHECK(int(r.witness.terms().size()) <= 36 + 6);
  double w = 0;
  for (const auto& t : r.witness.terms()) w += t.weight;
  CHECK(w == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("E_max is deterministic for a fixed seed") {
  Rng rng(7);
  const BipartiteState rho(random_density(4, rng), kQubits);
  const EmaxResult a = emax(rho, quick(9)), b = emax(rho, quick(9));
  CHECK(a.upper_bits == b.upper_bits);
  CHECK(a.lower_bits == b.lower_bits);
}

TEST_CASE("D_max conditions behind the monotone property") {
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const MonotoneReport rep = monotone_condition_suite(BipartiteState(random_density(4, rng), kQubits), rng.split(t).seed());
    CHECK(rep.pass);
    CHECK(rep.checks.size() == 9);
  }
}

TEST_CASE("instrument inequality with the unnormalized sum fails for dephasing") {
  // V_i = |0><i| on a qubit, rho = diag(0.9, 0.1), sigma = I/2. Each outcome
  // maps to |0><0|, so the weighted left side is 0 while
  // sum_i D_max(rho_i || sigma_i) = log2(1.8) + log2(0.2) < 0.
  const DensityOperator rho = DensityOperator::diagonal({0.9, 0.1});
  const DensityOperator sigma = DensityOperator::maximally_mixed(2);
  double weighted = 0.0, unnormalized = 0.0;
  for (int i = 0; i < 2; ++i) {
    Matrix v = Matrix::Zero(2, 2);
    v(0, i) = 1.0;
    const Matrix ri = v * rho.matrix() * v.adjoint(), si = v * sigma.matrix() * v.adjoint();
    const double alpha = ri.trace().real(), beta = si.trace().real();
    weighted += alpha * d_max(HermitianOperator(Matrix(ri / alpha)), HermitianOperator(Matrix(si / beta))).bits;
    unnormalized += d_max(HermitianOperator(ri), HermitianOperator(si)).bits;
  }
  CHECK(weighted == doctest::Approx(0.0).scale(1));
  CHECK(unnormalized == doctest::Approx(std::log2(1.8) + std::log2(0.2)));
  CHECK(weighted > unnormalized);
  // The bound by the undivided divergence holds.
  CHECK(weighted <= d_max(rho, sigma).bits);
}

TEST_CASE("D_max of a block-diagonal pair is the largest block, not the sum") {
  const DensityOperator rho = DensityOperator::diagonal({0.6, 0.4});
  const DensityOperator sigma = DensityOperator::diagonal({0.4, 0.6});
  const double block0 = std::log2(0.6 / 0.4), block1 = std::log2(0.4 / 0.6);
  CHECK(d_max(rho, sigma).bits == doctest::Approx(std::max(block0, block1)));
  CHECK(std::abs(d_max(rho, sigma).bits - (block0 + block1)) > 0.5);
}

TEST_CASE("entanglement inputs are validated") {
  CHECK_THROWS_AS(emax(BipartiteState(DensityOperator::maximally_mixed(4), Dims{1, 4})), ValidationError);
  CHECK_THROWS_AS(ppt_emax_lower(BipartiteState(DensityOperator::maximally_mixed(18), Dims{3, 6})), ValidationError);
}

}  // TEST_SUITE
