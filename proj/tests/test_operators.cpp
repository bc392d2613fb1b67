#include "oracles.hpp"

#include <qdiv/operators.hpp>
#include <qdiv/random.hpp>

#include <doctest.h>

using namespace qdiv;

namespace {

Matrix dg(std::vector<double> w) { return oracle::diag(w); }

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("eigendecomposition is sorted and reconstructs") {
  CHECK(eig_decompose(HermitianOperator::identity(2)).values.isApprox(RealVector::Ones(2)));
  const auto s = eig_decompose(HermitianOperator(dg({0.25, 0.75})));
  CHECK(s.values(0) == doctest::Approx(0.75));
  CHECK(s.values(1) == doctest::Approx(0.25));

  Rng rng(1);
  const HermitianOperator h = random_hermitian(4, rng);
  const auto eig = eig_decompose(h);
  Matrix rebuilt = Matrix::Zero(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i) rebuilt += eig.values(i) * eig.vectors.col(i) * eig.vectors.col(i).adjoint();
  CHECK((rebuilt - h.matrix()).norm() <= 1e-9);
  const Eigen::VectorXd ref = oracle::eigenvalues(h.matrix());  // ascending
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(eig.values(i) == doctest::Approx(ref(3 - i)).epsilon(1e-12));
}

TEST_CASE("comparison projectors") {
  const HermitianOperator a(dg({2, 0})), b(dg({1, 1}));
  CHECK(compare_projector(a, b, Relation::GreaterEqual).matrix().isApprox(dg({1, 0})));
  CHECK(compare_projector(a, a, Relation::GreaterEqual).matrix().isApprox(Matrix::Identity(2, 2)));
  CHECK(compare_projector(a, a, Relation::Greater).matrix().norm() == 0.0);

  // Commuting pairs: entrywise comparison of the diagonals.
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(5), y(5);
    for (int i = 0; i < 5; ++i) x[i] = rng.uniform(-1, 1), y[i] = rng.uniform(-1, 1);
    const Matrix u = random_unitary(5, rng);
    const HermitianOperator ha(Matrix(u * dg(x) * u.adjoint())), hb(Matrix(u * dg(y) * u.adjoint()));
    std::vector<double> expect(5);
    for (int i = 0; i < 5; ++i) expect[i] = x[i] >= y[i] ? 1.0 : 0.0;
    const Matrix p = compare_projector(ha, hb, Relation::GreaterEqual).matrix();
    CHECK((p - u * dg(expect) * u.adjoint()).norm() <= 1e-9);
  }
}

TEST_CASE("support projector") {
  const auto p0 = support_projector(DensityOperator(dg({1, 0})));
  CHECK(p0.rank() == 1);
  CHECK(p0.matrix().isApprox(dg({1, 0})));
  CHECK(support_projector(DensityOperator::maximally_mixed(2)).rank() == 2);
  const auto p = support_projector(DensityOperator(dg({0.9, 0.1, 0})));
  CHECK(p.rank() == 2);
  CHECK(p.matrix().isApprox(dg({1, 1, 0})));
}

TEST_CASE("generalized inverse square root") {
  CHECK(generalized_inverse_sqrt(HermitianOperator::identity(3)).matrix().isApprox(Matrix::Identity(3, 3)));
  CHECK(generalized_inverse_sqrt(HermitianOperator(dg({4, 0}))).matrix().isApprox(dg({0.5, 0})));
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const DensityOperator s = random_density(5, 3, rng);
    const Matrix g = generalized_inverse_sqrt(HermitianOperator(s.matrix())).matrix();
    // Identity on the support: g s g is the projector onto supp s.
    const Matrix proj = g * s.matrix() * g;
    CHECK((proj * proj - proj).norm() <= 1e-9);
    CHECK(proj.trace().real() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK((proj * s.matrix() - s.matrix()).norm() <= 1e-9);
  }
}

TEST_CASE("trace distance and fidelity") {
  const DensityOperator a = DensityOperator::diagonal({0.9, 0.1}), b = DensityOperator::diagonal({0.5, 0.5});
  CHECK(trace_distance<double>(a, a) == doctest::Approx(0.0));
  CHECK(trace_distance<double>(DensityOperator::diagonal({1, 0}), DensityOperator::diagonal({0, 1})) ==
        doctest::Approx(2.0));
  CHECK(trace_distance<double>(a, b) == doctest::Approx(std::abs(0.9 - 0.5) + std::abs(0.1 - 0.5)));
  CHECK(fidelity(a, a) == doctest::Approx(1.0));
  CHECK(fidelity(DensityOperator::diagonal({1, 0}), DensityOperator::diagonal({0, 1})) == doctest::Approx(0.0));
  CHECK(fidelity(a, b) == doctest::Approx(std::sqrt(0.45) + std::sqrt(0.05)));
}

TEST_CASE("tensor and partial trace") {
  Rng rng(4);
  const DensityOperator r = random_density(2, rng), s = random_density(3, rng);
  const DensityOperator rs = tensor(r, s);
  CHECK((rs.matrix() - oracle::kron(r.matrix(), s.matrix())).norm() <= 1e-14);
  CHECK((partial_trace(rs, Dims{2, 3}, Subsystem::A).matrix() - r.matrix()).norm() <= 1e-12);
  CHECK((partial_trace(rs, Dims{2, 3}, Subsystem::B).matrix() - s.matrix()).norm() <= 1e-12);

  const DensityOperator bell = DensityOperator::pure(oracle::max_entangled(2));
  CHECK(partial_trace(bell, Dims{2, 2}, Subsystem::A).matrix().isApprox(Matrix::Identity(2, 2) / 2.0));

  for (int t = 0; t < 10; ++t) {
    const HermitianOperator x = random_hermitian(6, rng);
    CHECK(partial_trace(x, Dims{3, 2}, Subsystem::A).trace() == doctest::Approx(x.trace()).epsilon(1e-12));
    CHECK(partial_trace(x, Dims{3, 2}, Subsystem::B).trace() == doctest::Approx(x.trace()).epsilon(1e-12));
  }
}

TEST_CASE("channels") {
  Rng rng(5);
  const DensityOperator r = random_density(3, rng);
  CHECK(apply_channel(QuantumChannel::identity(3), r).matrix().isApprox(r.matrix()));
  CHECK(apply_channel(QuantumChannel::completely_depolarizing(3), r).matrix().isApprox(Matrix::Identity(3, 3) / 3.0));
  for (int t = 0; t < 10; ++t) {
    const QuantumChannel c = random_channel(3, 2, 2, rng);
    const DensityOperator x = random_density(3, 2, rng);
    CHECK(apply_channel(c, x).trace() == doctest::Approx(x.trace()).epsilon(1e-10));
  }
}

TEST_CASE("invalid operators are rejected") {
  Matrix nh = Matrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianOperator{nh}, ValidationError);
  CHECK_THROWS_AS(DensityOperator::diagonal({1.2, -0.2}), ValidationError);
  CHECK_THROWS_AS(DensityOperator::diagonal({0.7, 0.7}), ValidationError);
  CHECK_THROWS_AS(Projector(dg({0.5, 1})), ValidationError);
  CHECK_THROWS_AS(BipartiteState(DensityOperator::maximally_mixed(4), Dims{2, 3}), ValidationError);
}

}  // TEST_SUITE
