#include "oracles.hpp"

#include <qdiv/random.hpp>

#include <doctest.h>

using namespace qdiv;

TEST_SUITE("random") {

TEST_CASE("rank-one draws are pure") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto ev = oracle::eigenvalues(random_density(2, 1, s).matrix());
    CHECK(ev(1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(ev(0)) <= 1e-10);
  }
}

TEST_CASE("unitaries and isometries") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Matrix u = random_unitary(5, s);
    CHECK((u.adjoint() * u - Matrix::Identity(5, 5)).norm() <= 1e-10);
  }
  Rng rng(9);
  const Matrix v = random_isometry(6, 3, rng);
  CHECK((v.adjoint() * v - Matrix::Identity(3, 3)).norm() <= 1e-10);
}

TEST_CASE("channels are trace preserving") {
  const QuantumChannel c = random_channel(3, 2, 2, 11);
  Matrix sum = Matrix::Zero(3, 3);
  for (const Matrix& k : c.kraus()) sum += k.adjoint() * k;
  CHECK((sum - Matrix::Identity(3, 3)).norm() <= 1e-10);
  CHECK_THROWS_AS(random_channel(4, 2, 1, 11), ValidationError);
}

TEST_CASE("pure bipartite draws") {
  const BipartiteState psi = random_pure_bipartite(2, 3, 5);
  CHECK(psi.state().trace() == doctest::Approx(1.0));
  const Matrix m = psi.state().matrix();
  CHECK((m * m - m).norm() <= 1e-10);
}

TEST_CASE("same seed, same bits") {
  CHECK(random_density(4, 2, 77).matrix() == random_density(4, 2, 77).matrix());
  CHECK(random_unitary(3, 77) == random_unitary(3, 77));
  CHECK(random_density(4, 2, 77).matrix() != random_density(4, 2, 78).matrix());
  const Rng root(123);
  CHECK(root.split(std::string_view("a")).seed() == root.split(std::string_view("a")).seed());
  CHECK(root.split(std::string_view("a")).seed() != root.split(std::string_view("b")).seed());
  CHECK(root.split(std::uint64_t(1)).seed() != root.split(std::uint64_t(2)).seed());
}

}  // TEST_SUITE
