#pragma once

// Min- and max-relative entropies, relative and Renyi relative entropy, the
// Chernoff exponent, and the entropies and mutual informations derived from
// them. All values are in bits.

#include <qdiv/operators.hpp>

#include <limits>

namespace qdiv {

/// Extended real in bits. finite == false means +infinity.
struct DivergenceValue {
  double bits = 0.0;
  bool finite = true;

  static DivergenceValue of(double b) { return {b, std::isfinite(b)}; }
  static DivergenceValue infinite() { return {std::numeric_limits<double>::infinity(), false}; }

  // Finite values compare as reals; +inf is above everything but itself.
  friend bool operator<=(const DivergenceValue& a, const DivergenceValue& b) { return !b.finite || (a.finite && a.bits <= b.bits); }
};

struct DivergenceReport {
  DivergenceValue d_min;
  DivergenceValue d_max;
  DivergenceValue rel_entropy;
  DivergenceValue chernoff;
  bool sandwich_ok = true;
};

// supp rho within supp sigma: ||(I - pi_sigma) rho (I - pi_sigma)||_inf <=
// tol::support_inclusion.
bool support_included(const Matrix& rho, const Matrix& sigma);

/// log2 of the largest eigenvalue of sigma^{-1/2} rho sigma^{-1/2}; +inf when
/// supp rho is not inside supp sigma. rho may be subnormalized.
DivergenceValue d_max(const HermitianOperator& rho, const HermitianOperator& sigma);

/// -log2 Tr(pi_rho sigma); +inf when the overlap is below 1e-14.
DivergenceValue d_min(const HermitianOperator& rho, const HermitianOperator& sigma);

DivergenceValue relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma);

/// (1/(alpha-1)) log2 Tr(rho^alpha sigma^{1-alpha}) for 0 < alpha < 1.
DivergenceValue renyi_relative(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha);

/// -log2 min_{0<=s<=1} Tr rho^s sigma^{1-s}, with rho^0 = pi_rho.
DivergenceValue chernoff_bound(const HermitianOperator& rho, const HermitianOperator& sigma);

// Tr rho^s sigma^{1-s} on the supports, for s in [0, 1].
double chernoff_objective(const HermitianOperator& rho, const HermitianOperator& sigma, double s);

/// The three characterizations of D_max evaluated independently of each
/// other. Only meaningful when supp rho is inside supp sigma.
struct DMaxForms {
  double eigen_bits = 0.0;      // log2 mu_max(sigma^{-1/2} rho sigma^{-1/2})
  double dominance_bits = 0.0;  // log2 min{lambda : rho <= lambda sigma}, by bisection
  double projector_bits = 0.0;  // log2 min{lambda : Tr[{rho >= lambda sigma}(rho - lambda sigma)] = 0}
  // Tr[{rho >= lambda sigma}(rho - lambda sigma)] at lambda = 2^eigen_bits.
  double projector_residual = 0.0;

  double max_disagreement() const {
    return std::max({std::abs(eigen_bits - dominance_bits), std::abs(eigen_bits - projector_bits),
                     std::abs(dominance_bits - projector_bits)});
  }
};

DMaxForms d_max_forms(const HermitianOperator& rho, const HermitianOperator& sigma);

// Tr[{rho >= lambda sigma}(rho - lambda sigma)], the positive part trace.
double positive_excess(const Matrix& rho, const Matrix& sigma, double lambda);

double h_min(const DensityOperator& rho);
double h_max(const DensityOperator& rho);

/// -D_max(rho_AB || I_A (x) sigma_B) and -D_min(rho_AB || I_A (x) sigma_B).
/// -inf when the divergence is infinite.
double h_min_cond(const BipartiteState& rho_ab, const DensityOperator& sigma_b);
double h_max_cond(const BipartiteState& rho_ab, const DensityOperator& sigma_b);

/// D_min / D_max of rho_AB against the product of its marginals.
DivergenceValue mutual_min(const BipartiteState& rho_ab);
DivergenceValue mutual_max(const BipartiteState& rho_ab);

/// Minimum error probability for equal priors, (1 - ||rho - sigma||_1 / 2) / 2.
double helstrom_min_error(const DensityOperator& rho, const DensityOperator& sigma);

/// d_min, d_max, relative entropy and Chernoff exponent in one pass.
/// sandwich_ok is d_min <= S <= d_max within 1e-9 when all are finite.
DivergenceReport divergence_report(const DensityOperator& rho, const DensityOperator& sigma);

// Unvalidated matrix versions used inside the optimizers. Arguments must be
// Hermitian and positive semidefinite.
DivergenceValue d_max_matrix(const Matrix& rho, const Matrix& sigma);
DivergenceValue d_min_matrix(const Matrix& rho, const Matrix& sigma);
DivergenceValue relative_entropy_matrix(const Matrix& rho, const Matrix& sigma);

}  // namespace qdiv
