#pragma once

// Seeded random operators. Every generator takes an explicit Rng; streams
// for independent trials are derived with Rng::split so that trial k draws
// the same numbers no matter how many trials run before it.

#include <qdiv/operators.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace qdiv {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  // Independent stream number `index` derived from this generator's seed.
  Rng split(std::uint64_t index) const { return Rng(splitmix64(seed_ ^ splitmix64(index + 0x51ed27ULL))); }

  // Stream for a named check: the label is hashed into the seed.
  Rng split(std::string_view label) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) h = (h ^ c) * 0x100000001b3ULL;
    return split(h);
  }

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Matrix with i.i.d. standard complex Gaussian entries (real and imaginary
// parts each of variance 1/2).
template <typename Real = double>
CMatrix<Real> ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const Real s = std::sqrt(Real(0.5));
  CMatrix<Real> g(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) g(r, c) = std::complex<Real>(s * rng.normal(), s * rng.normal());
  return g;
}

inline void require_positive_dim(Eigen::Index d, const char* what) {
  if (d < 1) throw ValidationError(std::string(what) + ": dimension must be >= 1");
}

/// G G^dagger / Tr(G G^dagger) with G a dim x rank Ginibre matrix.
template <typename Real = double>
BasicDensity<Real> random_density(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  require_positive_dim(dim, "random_density");
  if (rank < 1 || rank > dim) throw ValidationError("random_density: rank must lie in [1, dim]");
  const CMatrix<Real> g = ginibre<Real>(dim, rank, rng);
  CMatrix<Real> m = g * g.adjoint();
  m /= m.trace().real();
  return BasicDensity<Real>::trusted(m);
}

template <typename Real = double>
BasicDensity<Real> random_density(Eigen::Index dim, Rng& rng) {
  return random_density<Real>(dim, dim, rng);
}

/// Haar unitary: QR of a Ginibre matrix with the phases of R's diagonal
/// moved into Q.
template <typename Real = double>
CMatrix<Real> random_unitary(Eigen::Index dim, Rng& rng) {
  require_positive_dim(dim, "random_unitary");
  const CMatrix<Real> g = ginibre<Real>(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix<Real>> qr(g);
  CMatrix<Real> q = qr.householderQ();
  const CMatrix<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto d = r(i, i);
    if (std::abs(d) > Real(0)) q.col(i) *= d / std::abs(d);
  }
  return q;
}

// dim x cols matrix with orthonormal columns, the first cols of a Haar unitary.
template <typename Real = double>
CMatrix<Real> random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  return random_unitary<Real>(rows, rng).leftCols(cols);
}

/// Random Stinespring isometry V: C^in -> C^env (x) C^out with the
/// environment traced out. Kraus operator k is the k-th block of out rows.
template <typename Real = double>
BasicChannel<Real> random_channel(Eigen::Index in_dim, Eigen::Index out_dim, Eigen::Index env_dim, Rng& rng) {
  require_positive_dim(in_dim, "random_channel");
  require_positive_dim(out_dim, "random_channel");
  require_positive_dim(env_dim, "random_channel");
  if (out_dim * env_dim < in_dim) {
    throw ValidationError("random_channel: out_dim * env_dim must be at least in_dim");
  }
  const CMatrix<Real> v = random_isometry<Real>(out_dim * env_dim, in_dim, rng);
  std::vector<CMatrix<Real>> kraus;
  for (Eigen::Index k = 0; k < env_dim; ++k) kraus.push_back(v.middleRows(k * out_dim, out_dim));
  return BasicChannel<Real>(std::move(kraus));
}

/// Haar-random pure state on C^dA (x) C^dB.
template <typename Real = double>
BasicBipartite<Real> random_pure_bipartite(Eigen::Index da, Eigen::Index db, Rng& rng) {
  require_positive_dim(da, "random_pure_bipartite");
  require_positive_dim(db, "random_pure_bipartite");
  const CVector<Real> psi = ginibre<Real>(da * db, 1, rng).col(0);
  return BasicBipartite<Real>(BasicDensity<Real>::pure(psi), Dims{da, db});
}

template <typename Real = double>
CVector<Real> random_unit_vector(Eigen::Index dim, Rng& rng) {
  CVector<Real> v = ginibre<Real>(dim, 1, rng).col(0);
  return v / v.norm();
}

/// Hermitian matrix (G + G^dagger)/2 with G Ginibre.
template <typename Real = double>
BasicHermitian<Real> random_hermitian(Eigen::Index dim, Rng& rng) {
  return BasicHermitian<Real>(hermitian_part(ginibre<Real>(dim, dim, rng)));
}

/// Effect 0 <= P <= I: random eigenbasis, eigenvalues uniform in [0, 1].
template <typename Real = double>
BasicHermitian<Real> random_effect(Eigen::Index dim, Rng& rng) {
  const CMatrix<Real> u = random_unitary<Real>(dim, rng);
  RVector<Real> w(dim);
  for (Eigen::Index i = 0; i < dim; ++i) w(i) = Real(rng.uniform());
  return BasicHermitian<Real>(hermitian_part(u * w.template cast<std::complex<Real>>().asDiagonal() * u.adjoint()));
}

/// Instrument with `outcomes` elements: the blocks of a random isometry
/// C^dim -> C^dim (x) C^outcomes.
template <typename Real = double>
BasicInstrument<Real> random_instrument(Eigen::Index dim, Eigen::Index outcomes, Rng& rng) {
  const CMatrix<Real> v = random_isometry<Real>(dim * outcomes, dim, rng);
  std::vector<CMatrix<Real>> elements;
  for (Eigen::Index k = 0; k < outcomes; ++k) elements.push_back(v.middleRows(k * dim, dim));
  return BasicInstrument<Real>(std::move(elements));
}

// Seed-taking overloads for one-shot callers.
template <typename Real = double>
BasicDensity<Real> random_density(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density<Real>(dim, rank, rng);
}
template <typename Real = double>
CMatrix<Real> random_unitary(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary<Real>(dim, rng);
}
template <typename Real = double>
BasicChannel<Real> random_channel(Eigen::Index in_dim, Eigen::Index out_dim, Eigen::Index env_dim,
                                  std::uint64_t seed) {
  Rng rng(seed);
  return random_channel<Real>(in_dim, out_dim, env_dim, rng);
}
template <typename Real = double>
BasicBipartite<Real> random_pure_bipartite(Eigen::Index da, Eigen::Index db, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure_bipartite<Real>(da, db, rng);
}

}  // namespace qdiv
