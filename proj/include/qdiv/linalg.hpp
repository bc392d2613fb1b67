#pragma once

// Dense complex linear algebra shared by every module: matrix aliases, the
// ordered eigendecomposition and spectral calculus on Hermitian matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

namespace qdiv {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Matrix = CMatrix<double>;
using Vector = CVector<double>;
using RealVector = RVector<double>;

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

// (M + M^dagger) / 2
template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  CMatrix<Real> out = (m + m.adjoint()) * Real(0.5);
  return out;
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

template <typename Real>
CMatrix<Real> identity(Eigen::Index dim) {
  return CMatrix<Real>::Identity(dim, dim);
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order. Each eigenvector is rephased so that its first component
/// of modulus above 1e-10 is real and positive, which makes the output
/// reproducible for non-degenerate spectra.
template <typename Real>
struct Spectrum {
  RVector<Real> values;
  CMatrix<Real> vectors;

  Eigen::Index dim() const { return values.size(); }

  CMatrix<Real> reconstruct() const {
    return vectors * values.template cast<std::complex<Real>>().asDiagonal() * vectors.adjoint();
  }

  // Applies f to each eigenvalue and rebuilds the matrix.
  template <typename F>
  CMatrix<Real> apply(F&& f) const {
    RVector<Real> mapped(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) mapped(i) = f(values(i));
    return vectors * mapped.template cast<std::complex<Real>>().asDiagonal() * vectors.adjoint();
  }

  // Projector onto the eigenvectors whose eigenvalue satisfies pred.
  template <typename Pred>
  CMatrix<Real> projector(Pred&& pred) const {
    CMatrix<Real> out = CMatrix<Real>::Zero(dim(), dim());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (pred(values(i))) out.noalias() += vectors.col(i) * vectors.col(i).adjoint();
    }
    return out;
  }
};

template <typename Derived>
Spectrum<typename Derived::RealScalar> eig_hermitian(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  const CMatrix<Real> h = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(h);
  const Eigen::Index n = h.rows();
  Spectrum<Real> s;
  s.values.resize(n);
  s.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.values(i) = solver.eigenvalues()(n - 1 - i);
    s.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto z = s.vectors(r, c);
      if (std::abs(z) > Real(1e-10)) {
        s.vectors.col(c) *= std::conj(z) / std::abs(z);
        break;
      }
    }
  }
  return s;
}

template <typename Derived>
typename Derived::RealScalar max_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(m.rows() - 1);
}

template <typename Derived>
typename Derived::RealScalar min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

template <typename Derived>
RVector<typename Derived::RealScalar> eigenvalues_descending(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

// Frobenius projection onto the positive semidefinite cone.
template <typename Derived>
CMatrix<typename Derived::RealScalar> positive_part(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  return eig_hermitian(m).apply([](Real x) { return x > Real(0) ? x : Real(0); });
}

// Schatten-1 norm of a Hermitian matrix.
template <typename Derived>
typename Derived::RealScalar trace_norm_hermitian(const Eigen::MatrixBase<Derived>& m) {
  return eigenvalues_descending(m).cwiseAbs().sum();
}

template <typename Derived>
typename Derived::RealScalar real_trace(const Eigen::MatrixBase<Derived>& m) {
  return m.trace().real();
}

// Re Tr(A B) for Hermitian A, B without forming the product.
template <typename DA, typename DB>
typename DA::RealScalar trace_product(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

// Euclidean projection of v onto {x >= 0, sum x = total}.
template <typename Real>
RVector<Real> project_simplex(const RVector<Real>& v, Real total = Real(1)) {
  std::vector<Real> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<Real>());
  Real cumulative = 0;
  Real theta = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const Real t = (cumulative - total) / Real(i + 1);
    if (u[i] - t > Real(0)) theta = t;
  }
  return (v.array() - theta).cwiseMax(Real(0)).matrix();
}

}  // namespace qdiv
