#pragma once

// Validated operator types (Hermitian, density, projector, channel,
// instrument, bipartite state) and the free functions of the operator core:
// spectral projections, supports, generalized inverses, distances, tensor
// products, partial traces and channel application.

#include <qdiv/errors.hpp>
#include <qdiv/linalg.hpp>
#include <qdiv/tolerances.hpp>

#include <unsupported/Eigen/KroneckerProduct>

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qdiv {

template <typename Real>
class BasicHermitian {
 public:
  using matrix_type = CMatrix<Real>;

  BasicHermitian() : m_(matrix_type::Zero(1, 1)) {}

  // Throws ValidationError if m is not square or deviates from its adjoint by
  // more than tol::hermitian (scaled by the largest entry when it exceeds 1).
  explicit BasicHermitian(matrix_type m) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols()) {
      throw ValidationError("HermitianOperator: matrix must be square with dim >= 1");
    }
    const Real scale = std::max(Real(1), max_abs(m_));
    const Real defect = hermiticity_defect(m_);
    if (!(defect <= Real(tol::hermitian) * scale)) {
      std::ostringstream os;
      os << "HermitianOperator: matrix is not Hermitian (max |A - A^dagger| = " << defect << ")";
      throw ValidationError(os.str());
    }
    m_ = hermitian_part(m_);
  }

  static BasicHermitian identity(Eigen::Index dim) { return BasicHermitian(matrix_type::Identity(dim, dim)); }
  static BasicHermitian zero(Eigen::Index dim) { return BasicHermitian(matrix_type::Zero(dim, dim)); }

  Eigen::Index dim() const { return m_.rows(); }
  const matrix_type& matrix() const { return m_; }
  std::complex<Real> operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }
  Real trace() const { return m_.trace().real(); }
  Spectrum<Real> spectrum() const { return eig_hermitian(m_); }

 protected:
  struct trusted_tag {};
  BasicHermitian(matrix_type m, trusted_tag) : m_(std::move(m)) {}

  matrix_type m_;
};

/// Positive operator with 0 < Tr <= 1. Subnormalized operators are valid
/// values; normalized() reports whether the trace equals one.
template <typename Real>
class BasicDensity : public BasicHermitian<Real> {
 public:
  using typename BasicHermitian<Real>::matrix_type;

  explicit BasicDensity(matrix_type m) : BasicHermitian<Real>(std::move(m)) {
    const Real lowest = min_eigenvalue(this->m_);
    if (lowest < -Real(tol::psd)) {
      std::ostringstream os;
      os << "DensityOperator: negative eigenvalue " << lowest;
      throw ValidationError(os.str());
    }
    init_trace();
  }

  explicit BasicDensity(const BasicHermitian<Real>& h) : BasicDensity(h.matrix()) {}

  // Skips the eigenvalue check. For matrices that are positive by
  // construction (Kronecker products, channel outputs, G G^dagger).
  static BasicDensity trusted(matrix_type m) { return BasicDensity(hermitian_part(m), trusted_tag2{}); }

  static BasicDensity maximally_mixed(Eigen::Index dim) {
    return BasicDensity(matrix_type::Identity(dim, dim) / Real(dim));
  }
  static BasicDensity pure(const CVector<Real>& psi) {
    const CVector<Real> v = psi / psi.norm();
    return trusted(v * v.adjoint());
  }
  static BasicDensity diagonal(const std::vector<Real>& weights) {
    matrix_type m = matrix_type::Zero(Eigen::Index(weights.size()), Eigen::Index(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i) m(Eigen::Index(i), Eigen::Index(i)) = weights[i];
    return BasicDensity(m);
  }

  bool normalized() const { return normalized_; }
  Real trace() const { return trace_; }

 private:
  struct trusted_tag2 {};
  BasicDensity(matrix_type m, trusted_tag2)
      : BasicHermitian<Real>(std::move(m), typename BasicHermitian<Real>::trusted_tag{}) {
    init_trace();
  }

  void init_trace() {
    trace_ = this->m_.trace().real();
    if (!(trace_ > Real(0)) || trace_ > Real(1) + Real(tol::normalized)) {
      std::ostringstream os;
      os << "DensityOperator: trace " << trace_ << " outside (0, 1]";
      throw ValidationError(os.str());
    }
    normalized_ = std::abs(trace_ - Real(1)) <= Real(tol::normalized);
  }

  Real trace_ = 1;
  bool normalized_ = true;
};

template <typename Real>
class BasicProjector : public BasicHermitian<Real> {
 public:
  using typename BasicHermitian<Real>::matrix_type;

  explicit BasicProjector(matrix_type m) : BasicHermitian<Real>(std::move(m)) {
    if (max_abs(this->m_ * this->m_ - this->m_) > Real(tol::idempotent)) {
      throw ValidationError("Projector: matrix is not idempotent");
    }
    rank_ = static_cast<Eigen::Index>(std::llround(static_cast<double>(this->trace())));
  }

  Eigen::Index rank() const { return rank_; }

 private:
  Eigen::Index rank_ = 0;
};

/// CPTP map given by Kraus operators K_k (out_dim x in_dim) with
/// sum_k K_k^dagger K_k = identity(in_dim).
template <typename Real>
class BasicChannel {
 public:
  explicit BasicChannel(std::vector<CMatrix<Real>> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw ValidationError("QuantumChannel: empty Kraus family");
    in_dim_ = kraus_.front().cols();
    out_dim_ = kraus_.front().rows();
    CMatrix<Real> sum = CMatrix<Real>::Zero(in_dim_, in_dim_);
    for (const auto& k : kraus_) {
      if (k.cols() != in_dim_ || k.rows() != out_dim_) {
        throw ValidationError("QuantumChannel: Kraus operators have inconsistent shapes");
      }
      sum.noalias() += k.adjoint() * k;
    }
    const Real defect = max_abs(sum - CMatrix<Real>::Identity(in_dim_, in_dim_));
    if (defect > Real(tol::completeness)) {
      std::ostringstream os;
      os << "QuantumChannel: not trace preserving (max |sum K^dagger K - I| = " << defect << ")";
      throw ValidationError(os.str());
    }
  }

  static BasicChannel identity(Eigen::Index dim) { return BasicChannel({CMatrix<Real>::Identity(dim, dim)}); }

  // Kraus {|i><j| / sqrt(d)}: every input goes to I/d.
  static BasicChannel completely_depolarizing(Eigen::Index dim) {
    std::vector<CMatrix<Real>> ks;
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        CMatrix<Real> k = CMatrix<Real>::Zero(dim, dim);
        k(i, j) = Real(1) / std::sqrt(Real(dim));
        ks.push_back(std::move(k));
      }
    }
    return BasicChannel(std::move(ks));
  }

  Eigen::Index in_dim() const { return in_dim_; }
  Eigen::Index out_dim() const { return out_dim_; }
  const std::vector<CMatrix<Real>>& kraus() const { return kraus_; }

 private:
  std::vector<CMatrix<Real>> kraus_;
  Eigen::Index in_dim_ = 0;
  Eigen::Index out_dim_ = 0;
};

/// Instrument {V_i} with sum_i V_i^dagger V_i = identity. Outcome i maps rho
/// to the subnormalized V_i rho V_i^dagger.
template <typename Real>
class BasicInstrument {
 public:
  explicit BasicInstrument(std::vector<CMatrix<Real>> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw ValidationError("QuantumInstrument: no elements");
    const Eigen::Index in = elements_.front().cols();
    CMatrix<Real> sum = CMatrix<Real>::Zero(in, in);
    for (const auto& v : elements_) {
      if (v.cols() != in) throw ValidationError("QuantumInstrument: inconsistent input dimensions");
      sum.noalias() += v.adjoint() * v;
    }
    if (max_abs(sum - CMatrix<Real>::Identity(in, in)) > Real(tol::completeness)) {
      throw ValidationError("QuantumInstrument: elements are not complete");
    }
  }

  const std::vector<CMatrix<Real>>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

 private:
  std::vector<CMatrix<Real>> elements_;
};

struct Dims {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  Eigen::Index total() const { return a * b; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

enum class Subsystem { A, B };

template <typename Real>
class BasicBipartite {
 public:
  BasicBipartite(BasicDensity<Real> state, Dims dims) : state_(std::move(state)), dims_(dims) {
    if (dims_.a < 1 || dims_.b < 1 || dims_.total() != state_.dim()) {
      std::ostringstream os;
      os << "BipartiteState: dims " << dims_.a << "x" << dims_.b << " do not match state dimension "
         << state_.dim();
      throw ValidationError(os.str());
    }
  }

  const BasicDensity<Real>& state() const { return state_; }
  Dims dims() const { return dims_; }

 private:
  BasicDensity<Real> state_;
  Dims dims_;
};

using HermitianOperator = BasicHermitian<double>;
using DensityOperator = BasicDensity<double>;
using Projector = BasicProjector<double>;
using QuantumChannel = BasicChannel<double>;
using QuantumInstrument = BasicInstrument<double>;
using BipartiteState = BasicBipartite<double>;

// ---------------------------------------------------------------------------
// Free functions

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* where) {
  if (a != b) {
    std::ostringstream os;
    os << where << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ValidationError(os.str());
  }
}

template <typename Real>
Spectrum<Real> eig_decompose(const BasicHermitian<Real>& a) {
  return a.spectrum();
}

enum class Relation { GreaterEqual, Greater, LessEqual, Less };

// Zero cutoff for spectral projections of a matrix with entries of size
// max_abs(d): tol::projector_zero, scaled up for matrices larger than 1.
template <typename Derived>
typename Derived::RealScalar projector_zero_cutoff(const Eigen::MatrixBase<Derived>& d) {
  using Real = typename Derived::RealScalar;
  return Real(tol::projector_zero) * std::max(Real(1), max_abs(d));
}

// Spectral projection {d R 0} of a Hermitian matrix.
template <typename Derived>
CMatrix<typename Derived::RealScalar> sign_projector(const Eigen::MatrixBase<Derived>& d, Relation rel) {
  using Real = typename Derived::RealScalar;
  const Real zero = projector_zero_cutoff(d);
  const auto s = eig_hermitian(d);
  return s.projector([&](Real x) {
    switch (rel) {
      case Relation::GreaterEqual: return x >= -zero;
      case Relation::Greater: return x > zero;
      case Relation::LessEqual: return x <= zero;
      case Relation::Less: return x < -zero;
    }
    return false;
  });
}

/// Projector {A R B} onto the eigenvectors of A - B whose eigenvalues stand in
/// relation R to zero.
template <typename Real>
BasicProjector<Real> compare_projector(const BasicHermitian<Real>& a, const BasicHermitian<Real>& b, Relation rel) {
  require_same_dim(a.dim(), b.dim(), "compare_projector");
  return BasicProjector<Real>(sign_projector(a.matrix() - b.matrix(), rel));
}

// Projector onto the eigenvectors with eigenvalue above
// tol::support_relative * (largest eigenvalue).
template <typename Derived>
CMatrix<typename Derived::RealScalar> support_projector_matrix(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  const auto s = eig_hermitian(m);
  const Real cutoff = Real(tol::support_relative) * std::max(s.values(0), Real(0));
  return s.projector([&](Real x) { return x > cutoff && x > Real(0); });
}

template <typename Real>
BasicProjector<Real> support_projector(const BasicHermitian<Real>& rho) {
  return BasicProjector<Real>(support_projector_matrix(rho.matrix()));
}

template <typename Derived>
void require_psd(const Eigen::MatrixBase<Derived>& m, const char* where) {
  using Real = typename Derived::RealScalar;
  const Real lowest = min_eigenvalue(m);
  if (lowest < -Real(tol::psd) * std::max(Real(1), max_abs(m))) {
    std::ostringstream os;
    os << where << ": operator has negative eigenvalue " << lowest;
    throw ValidationError(os.str());
  }
}

// m^p on the support of a positive matrix, zero on its kernel.
template <typename Derived>
CMatrix<typename Derived::RealScalar> support_power(const Eigen::MatrixBase<Derived>& m,
                                                   typename Derived::RealScalar p) {
  using Real = typename Derived::RealScalar;
  const auto s = eig_hermitian(m);
  const Real cutoff = Real(tol::support_relative) * std::max(s.values(0), Real(0));
  return s.apply([&](Real x) { return (x > cutoff && x > Real(0)) ? std::pow(x, p) : Real(0); });
}

// Square root of a positive matrix, clipping round-off negatives.
template <typename Derived>
CMatrix<typename Derived::RealScalar> psd_sqrt(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  return eig_hermitian(m).apply([](Real x) { return x > Real(0) ? std::sqrt(x) : Real(0); });
}

/// sigma^{-1/2} on supp sigma and zero on the kernel. Throws on eigenvalues
/// below -tol::psd.
template <typename Real>
BasicHermitian<Real> generalized_inverse_sqrt(const BasicHermitian<Real>& sigma) {
  require_psd(sigma.matrix(), "generalized_inverse_sqrt");
  return BasicHermitian<Real>(support_power(sigma.matrix(), Real(-0.5)));
}

/// ||A - B||_1, the sum of absolute eigenvalues of A - B.
template <typename Real>
Real trace_distance(const BasicHermitian<Real>& a, const BasicHermitian<Real>& b) {
  require_same_dim(a.dim(), b.dim(), "trace_distance");
  return trace_norm_hermitian(a.matrix() - b.matrix());
}

/// Tr sqrt(rho^{1/2} rho' rho^{1/2}), computed as the nuclear norm of
/// rho^{1/2} rho'^{1/2}. Both arguments must be normalized.
template <typename Real>
Real fidelity(const BasicDensity<Real>& rho, const BasicDensity<Real>& other) {
  require_same_dim(rho.dim(), other.dim(), "fidelity");
  if (!rho.normalized() || !other.normalized()) {
    throw ValidationError("fidelity: both arguments must be normalized states");
  }
  const CMatrix<Real> prod = psd_sqrt(rho.matrix()) * psd_sqrt(other.matrix());
  Eigen::JacobiSVD<CMatrix<Real>> svd(prod);
  return std::clamp(svd.singularValues().sum(), Real(0), Real(1));
}

template <typename DA, typename DB>
CMatrix<typename DA::RealScalar> kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Real = typename DA::RealScalar;
  return CMatrix<Real>(Eigen::kroneckerProduct(a.derived(), b.derived()));
}

template <typename Real>
BasicHermitian<Real> tensor(const BasicHermitian<Real>& a, const BasicHermitian<Real>& b) {
  return BasicHermitian<Real>(kron(a.matrix(), b.matrix()));
}

template <typename Real>
BasicDensity<Real> tensor(const BasicDensity<Real>& a, const BasicDensity<Real>& b) {
  return BasicDensity<Real>::trusted(kron(a.matrix(), b.matrix()));
}

// Partial trace of a (dA*dB) x (dA*dB) matrix, keeping one factor.
template <typename Derived>
CMatrix<typename Derived::RealScalar> partial_trace_matrix(const Eigen::MatrixBase<Derived>& x, Dims dims,
                                                          Subsystem keep) {
  using Real = typename Derived::RealScalar;
  if (dims.a < 1 || dims.b < 1 || dims.total() != x.rows() || x.rows() != x.cols()) {
    std::ostringstream os;
    os << "partial_trace: dims " << dims.a << "x" << dims.b << " do not match matrix of size " << x.rows();
    throw ValidationError(os.str());
  }
  const Eigen::Index da = dims.a, db = dims.b;
  if (keep == Subsystem::A) {
    CMatrix<Real> out = CMatrix<Real>::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index k = 0; k < da; ++k)
        for (Eigen::Index j = 0; j < db; ++j) out(i, k) += x(i * db + j, k * db + j);
    return out;
  }
  CMatrix<Real> out = CMatrix<Real>::Zero(db, db);
  for (Eigen::Index j = 0; j < db; ++j)
    for (Eigen::Index l = 0; l < db; ++l)
      for (Eigen::Index i = 0; i < da; ++i) out(j, l) += x(i * db + j, i * db + l);
  return out;
}

template <typename Real>
BasicDensity<Real> partial_trace(const BasicDensity<Real>& rho, Dims dims, Subsystem keep) {
  return BasicDensity<Real>::trusted(partial_trace_matrix(rho.matrix(), dims, keep));
}

template <typename Real>
BasicHermitian<Real> partial_trace(const BasicHermitian<Real>& x, Dims dims, Subsystem keep) {
  return BasicHermitian<Real>(partial_trace_matrix(x.matrix(), dims, keep));
}

// Transpose on one tensor factor.
template <typename Derived>
CMatrix<typename Derived::RealScalar> partial_transpose_matrix(const Eigen::MatrixBase<Derived>& x, Dims dims,
                                                              Subsystem sys) {
  using Real = typename Derived::RealScalar;
  if (dims.total() != x.rows() || x.rows() != x.cols()) {
    throw ValidationError("partial_transpose: dims do not match matrix size");
  }
  const Eigen::Index da = dims.a, db = dims.b;
  CMatrix<Real> out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < db; ++j)
      for (Eigen::Index k = 0; k < da; ++k)
        for (Eigen::Index l = 0; l < db; ++l) {
          if (sys == Subsystem::B) {
            out(i * db + j, k * db + l) = x(i * db + l, k * db + j);
          } else {
            out(i * db + j, k * db + l) = x(k * db + j, i * db + l);
          }
        }
  return out;
}

template <typename Real, typename Derived>
CMatrix<Real> apply_kraus(const std::vector<CMatrix<Real>>& kraus, const Eigen::MatrixBase<Derived>& x) {
  CMatrix<Real> out = CMatrix<Real>::Zero(kraus.front().rows(), kraus.front().rows());
  for (const auto& k : kraus) out.noalias() += k * x * k.adjoint();
  return out;
}

template <typename Real>
BasicDensity<Real> apply_channel(const BasicChannel<Real>& channel, const BasicDensity<Real>& rho) {
  require_same_dim(channel.in_dim(), rho.dim(), "apply_channel");
  return BasicDensity<Real>::trusted(apply_kraus(channel.kraus(), rho.matrix()));
}

template <typename Real>
BasicHermitian<Real> apply_channel(const BasicChannel<Real>& channel, const BasicHermitian<Real>& x) {
  require_same_dim(channel.in_dim(), x.dim(), "apply_channel");
  return BasicHermitian<Real>(apply_kraus(channel.kraus(), x.matrix()));
}

// Lambda_A (x) Lambda_B as one channel on the joint space.
template <typename Real>
BasicChannel<Real> tensor(const BasicChannel<Real>& a, const BasicChannel<Real>& b) {
  std::vector<CMatrix<Real>> ks;
  for (const auto& ka : a.kraus())
    for (const auto& kb : b.kraus()) ks.push_back(kron(ka, kb));
  return BasicChannel<Real>(std::move(ks));
}

// Operator norm of the commutator [a, b].
template <typename DA, typename DB>
typename DA::RealScalar commutator_norm(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Real = typename DA::RealScalar;
  const CMatrix<Real> c = a * b - b * a;
  if (c.size() == 0) return Real(0);
  Eigen::JacobiSVD<CMatrix<Real>> svd(c);
  return svd.singularValues()(0);
}

/// Common eigenbasis of two commuting Hermitian matrices: a = U diag(pa) U^dagger
/// and b = U diag(pb) U^dagger. Empty when the commutator exceeds 1e-10 or
/// the joint basis fails to diagonalize both within 1e-9.
template <typename Real>
struct JointDiagonal {
  CMatrix<Real> basis;
  RVector<Real> a;
  RVector<Real> b;
};

template <typename DA, typename DB>
std::optional<JointDiagonal<typename DA::RealScalar>> joint_diagonalize(const Eigen::MatrixBase<DA>& a,
                                                                      const Eigen::MatrixBase<DB>& b) {
  using Real = typename DA::RealScalar;
  const Eigen::Index n = a.rows();
  JointDiagonal<Real> out;
  const CMatrix<Real> off_a = a - CMatrix<Real>(a.diagonal().asDiagonal());
  const CMatrix<Real> off_b = b - CMatrix<Real>(b.diagonal().asDiagonal());
  if (max_abs(off_a) == Real(0) && max_abs(off_b) == Real(0)) {
    out.basis = CMatrix<Real>::Identity(n, n);
    out.a = a.diagonal().real();
    out.b = b.diagonal().real();
    return out;
  }
  if (commutator_norm(a, b) > Real(1e-10)) return std::nullopt;
  // An irrational mixing weight separates eigenvalues that coincide in one
  // matrix but not the other.
  const Real mix = Real(0.7548776662466927);
  const auto s = eig_hermitian(CMatrix<Real>(a + mix * b));
  const CMatrix<Real> da = s.vectors.adjoint() * a * s.vectors;
  const CMatrix<Real> db = s.vectors.adjoint() * b * s.vectors;
  out.basis = s.vectors;
  out.a = da.diagonal().real();
  out.b = db.diagonal().real();
  const Real scale = std::max({Real(1), max_abs(a), max_abs(b)});
  if (max_abs(CMatrix<Real>(da - CMatrix<Real>(out.a.template cast<std::complex<Real>>().asDiagonal()))) > Real(1e-9) * scale ||
      max_abs(CMatrix<Real>(db - CMatrix<Real>(out.b.template cast<std::complex<Real>>().asDiagonal()))) > Real(1e-9) * scale) {
    return std::nullopt;
  }
  return out;
}

}  // namespace qdiv
