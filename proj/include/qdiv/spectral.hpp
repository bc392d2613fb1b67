#pragma once

// Finite-n information-spectrum quantities for i.i.d. pairs (rho^{(x)n},
// sigma^{(x)n}): spectral traces Tr[{rho_n >= 2^{n gamma} sigma_n} rho_n] and
// smooth-divergence rates at each n.

#include <qdiv/smoothing.hpp>

#include <vector>

namespace qdiv {

/// Largest dimension a dense tensor power may have.
inline constexpr Eigen::Index kDenseTensorLimit = 4096;

class IIDPair {
 public:
  IIDPair(DensityOperator rho, DensityOperator sigma);

  const DensityOperator& rho() const { return rho_; }
  const DensityOperator& sigma() const { return sigma_; }
  Eigen::Index dim() const { return rho_.dim(); }
  /// ||[rho, sigma]||_inf <= 1e-10.
  bool commuting() const { return commuting_; }
  /// Joint eigenvalues (rho, sigma) when commuting; empty otherwise.
  const std::vector<double>& p() const { return p_; }
  const std::vector<double>& q() const { return q_; }

 private:
  DensityOperator rho_;
  DensityOperator sigma_;
  bool commuting_ = false;
  std::vector<double> p_, q_;
};

/// n-fold Kronecker power; throws ValidationError above kDenseTensorLimit.
DensityOperator tensor_power(const DensityOperator& rho, int n);

/// Tr[{rho_n >= 2^{n gamma} sigma_n} rho_n]. Commuting pairs are summed over
/// type classes with the log-ratio quantized to 1e-9 bits; other pairs use
/// dense tensor powers.
double spectral_trace(const IIDPair& pair, int n, double gamma_bits);
double spectral_trace_dense(const IIDPair& pair, int n, double gamma_bits);
double spectral_trace_classical(const IIDPair& pair, int n, double gamma_bits);

/// lhs = Tr[{rho_n >= 2^{n gamma} sigma_n} sigma_n] against bound = 2^{-n gamma};
/// holds when lhs <= bound + 1e-9.
struct SigmaTailCheck {
  double lhs = 0.0;
  double bound = 0.0;
  bool holds = true;
};
SigmaTailCheck sigma_tail_check(const IIDPair& pair, int n, double gamma_bits);

/// Type classes of the commuting pair's n-fold product, as classical outcomes
/// with multiplicities. Letters with p = 0 are dropped.
std::vector<ClassicalOutcome> type_class_outcomes(const std::vector<double>& p, const std::vector<double>& q, int n);

struct RatePoint {
  int n = 0;
  double eps = 0.0;
  double dmax_over_n = 0.0;
  double dmin_over_n = 0.0;
  double rel_entropy = 0.0;  // S(rho || sigma) in bits
};

enum class RateMethod {
  Auto,       // commuting: exact classical smoothers on the dense spectrum; otherwise Dense
  Dense,      // smooth_dmax_upper and smooth_dmin_lower on dense tensor powers
  Classical,  // commuting only: type classes, no dense size limit
};

/// Per n: the smooth max-relative entropy (or its upper bound) and the smooth
/// min-relative entropy lower bound of the n-fold pair, divided by n.
std::vector<RatePoint> rate_curve(const IIDPair& pair, double eps, const std::vector<int>& n_list,
                                  RateMethod method = RateMethod::Auto);

/// Finite-n estimates of the sup- and inf-spectral divergence rates: the
/// rate curve values at n_max. These are not limits.
struct RateEstimate {
  double sup_est = 0.0;
  double inf_est = 0.0;
};
RateEstimate divergence_rate_estimate(const IIDPair& pair, double eps, int n_max,
                                      RateMethod method = RateMethod::Auto);

}  // namespace qdiv
