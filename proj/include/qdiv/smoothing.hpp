#pragma once

// Smooth min- and max-relative entropies over the trace-norm ball
//   B^eps(rho) = { rhobar >= 0 : ||rhobar - rho||_1 <= eps, Tr rhobar <= Tr rho },
// the constructive smoothing certificate, and exact solvers for small or
// commuting inputs.

#include <qdiv/divergences.hpp>

#include <optional>
#include <vector>

namespace qdiv {

struct EpsilonBall {
  DensityOperator center;
  double epsilon = 0.0;

  bool contains(const Matrix& candidate) const;
  bool contains(const HermitianOperator& candidate) const { return contains(candidate.matrix()); }
};

/// Smoothing of rho towards 2^lambda sigma: Delta = (rho - 2^lambda sigma)_+,
/// beta = 2^lambda sigma + Delta, T = (2^lambda sigma)^{1/2} beta^{-1/2} and
/// smoothed = T rho T^dagger.
struct SmoothingCertificate {
  double lambda_bits = 0.0;
  double epsilon_used = 0.0;         // sqrt(8 Tr Delta)
  Matrix delta;                      // Delta
  Matrix transform;                  // T
  DensityOperator smoothed;          // T rho T^dagger
  double transform_trace_dist = 0.0; // ||smoothed - rho||_1
};

/// Builds the certificate and checks d_max(smoothed, sigma) <= lambda + 1e-7,
/// ||smoothed - rho||_1 <= sqrt(8 Tr Delta) + 1e-7 and ball membership.
/// Throws ConsistencyError if any check fails.
SmoothingCertificate smoothing_certificate(const DensityOperator& rho, const DensityOperator& sigma, double lambda_bits);

// sqrt(8 Tr[{rho > 2^lambda sigma} rho]).
double tail_epsilon(const Matrix& rho, const Matrix& sigma, double lambda_bits);

struct SmoothDmaxUpper {
  double value_bits = 0.0;  // +inf when no finite lambda satisfies the tail condition
  bool floor_hit = false;   // the bracket floor d_max - 60 already satisfied it
  double tail_epsilon = 0.0;
  std::optional<SmoothingCertificate> certificate;
};

/// Smallest lambda (bisection to 1e-6 bits over [d_max - 60, d_max]) with
/// tail_epsilon(lambda) <= eps, together with the certificate at that lambda.
/// An upper bound on the smooth max-relative entropy. Requires eps > 0.
SmoothDmaxUpper smooth_dmax_upper(const DensityOperator& rho, const DensityOperator& sigma, double eps);

struct SmoothDmaxExact {
  double value_bits = 0.0;   // log2 of the smallest t found feasible
  double lower_bits = 0.0;   // largest t shown infeasible (or the trace bound)
  Matrix witness;            // rhobar in the ball with rhobar <= 2^value_bits sigma
  long iterations = 0;       // total splitting iterations over the bisection
};

struct ExactSolverOptions {
  double bits_resolution = 1e-6;
  double residual_tolerance = 1e-7;
  long iteration_cap = 10000;
};

/// inf over the ball of D_max(rhobar || sigma) by bisection on t = 2^lambda.
/// Each step decides whether some rhobar in the ball satisfies
/// 0 <= rhobar <= t sigma: a splitting method minimizes ||X - rho||_1 over
/// {0 <= X <= t sigma, Tr X <= Tr rho}; feasibility is accepted only for a
/// repaired candidate that satisfies all constraints exactly, and rejected
/// on a dual certificate or on convergence. Reports the achieved value.
/// Throws SolverError when a step hits the iteration cap with residuals
/// above 1e-5.
SmoothDmaxExact smooth_dmax_exact(const DensityOperator& rho, const DensityOperator& sigma, double eps,
                                  const ExactSolverOptions& options = {});

struct SmoothDminLower {
  double value_bits = 0.0;
  double gamma_bits = 0.0;  // grid point achieving the value (NaN if none admissible)
  double delta = 0.0;       // 1 - Tr(P rho) at that point
  bool admissible_found = false;
};

/// Sweeps gamma over 512 points in [d_min - 2, d_max + 2], P = {rho >= 2^gamma sigma},
/// delta = 1 - Tr(P rho); among points with 2 sqrt(delta) <= eps returns the
/// largest D_min(P rho P || sigma), and never less than d_min(rho, sigma).
SmoothDminLower smooth_dmin_lower(const DensityOperator& rho, const DensityOperator& sigma, double eps);

// ---------------------------------------------------------------------------
// Commuting inputs. An outcome is a joint eigenvector with eigenvalue p of
// rho and q of sigma, repeated `multiplicity` times; values are stored as
// natural logarithms so that tensor powers with long type classes neither
// underflow nor overflow.

struct ClassicalOutcome {
  double log_p = 0.0;
  double log_q = 0.0;  // -inf when q = 0
  double log_multiplicity = 0.0;
};

std::vector<ClassicalOutcome> classical_outcomes(const std::vector<double>& p, const std::vector<double>& q);

/// Exact smooth max-relative entropy: the smallest t with
/// sum (p - t q)_+ <= eps (outcomes with q = 0 must be removed entirely).
/// -inf when eps covers all of rho's mass.
double smooth_dmax_classical(const std::vector<ClassicalOutcome>& outcomes, double eps);

/// Lower bound on the smooth min-relative entropy: deletes outcomes in order
/// of increasing p/q while the deleted mass stays within eps, keeping at
/// least one outcome.
double smooth_dmin_classical_greedy(const std::vector<ClassicalOutcome>& outcomes, double eps);

/// Exact smooth max-relative entropy of diagonal weights.
double smooth_dmax_exact_classical(const std::vector<double>& p, const std::vector<double>& q, double eps);

/// Exact smooth min-relative entropy of diagonal weights by enumeration of
/// the nonempty subsets S of supp p with sum_{i not in S} p_i <= eps;
/// returns max -log2 sum_{i in S} q_i. Support size at most 20.
double smooth_dmin_exact_classical(const std::vector<double>& p, const std::vector<double>& q, double eps);

}  // namespace qdiv
