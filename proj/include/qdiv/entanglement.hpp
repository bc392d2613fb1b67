#pragma once

// Max-relative entropy of entanglement E_max(rho) = min over separable sigma
// of D_max(rho || sigma): an upper bound from an explicit separable witness,
// a certified lower bound from the PPT relaxation, the relative entropy of
// entanglement by the same search, and the distance-function conditions that
// make E_max an entanglement monotone.

#include <qdiv/divergences.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qdiv {

struct SeparableTerm {
  double weight = 0.0;
  Vector a;
  Vector b;
};

/// sigma = sum_k w_k |a_k><a_k| (x) |b_k><b_k| with w on the simplex and unit
/// vectors (both within 1e-10).
class SeparableEnsemble {
 public:
  SeparableEnsemble(std::vector<SeparableTerm> terms, Dims dims);

  const std::vector<SeparableTerm>& terms() const { return terms_; }
  Dims dims() const { return dims_; }
  Matrix assemble() const;
  DensityOperator state() const { return DensityOperator::trusted(assemble()); }

 private:
  std::vector<SeparableTerm> terms_;
  Dims dims_;
};

HermitianOperator partial_transpose(const BipartiteState& rho_ab, Subsystem sys);

/// Minimum eigenvalue of the partial transpose is at least -1e-9.
bool is_ppt(const BipartiteState& rho_ab);

struct EmaxConfig {
  int terms = 0;       // atoms kept in the ensemble; 0 means (dA dB)^2
  int restarts = 4;
  std::uint64_t seed = 42;
  int iters = 150;     // column-generation rounds per smoothing stage
};

struct EmaxResult {
  double upper_bits = 0.0;
  double lower_bits = 0.0;
  SeparableEnsemble witness;
  double gap = 0.0;
  double barrier_weight = 0.0;  // weight of the maximally mixed component inside the witness
};

struct PptLowerBound {
  double bits = 0.0;         // certified: log2 Tr(Y rho) / mu_max(Y + W^Gamma)
  double primal_bits = 0.0;  // log2 Tr tau of a feasible PPT dominating tau
  long iterations = 0;
};

/// Certified lower bound on E_max from  t_ppt = min Tr tau  s.t.  tau >= rho,
/// tau^Gamma >= 0.  A splitting method approximates the optimum; the returned
/// value comes from the dual pair (Y, W) it produces and is valid for any
/// iterate. Dimension at most 16.
PptLowerBound ppt_emax_bound(const BipartiteState& rho_ab);
double ppt_emax_lower(const BipartiteState& rho_ab);

/// Two-sided estimate of E_max: upper = D_max(rho || witness) for an explicit
/// separable witness, lower = ppt_emax_lower.
EmaxResult emax(const BipartiteState& rho_ab, const EmaxConfig& config = {});

/// Best S(rho || sigma) found over separable sigma by the same search; an
/// upper bound on the relative entropy of entanglement. An optional warm
/// start is included among the candidates.
double rel_ent_entanglement(const BipartiteState& rho_ab, const EmaxConfig& config = {},
                            const SeparableEnsemble* warm_start = nullptr);

/// Best separable sigma found for either objective.
enum class SeparableObjective { MaxRelativeEntropy, RelativeEntropy };
SeparableEnsemble separable_search(const BipartiteState& rho_ab, SeparableObjective objective,
                                   const EmaxConfig& config, const SeparableEnsemble* warm_start = nullptr);

struct ConditionCheck {
  std::string name;
  double violation = 0.0;  // positive part of (left side - right side), or |difference| for equalities
  bool pass = true;
};

struct MonotoneReport {
  std::vector<ConditionCheck> checks;
  bool pass = true;
};

/// Checks on D_max itself, for rho_ab against a seeded random state sigma:
///   nonnegativity and faithfulness, joint unitary invariance, partial-trace
///   monotonicity, the instrument inequality (both with the unnormalized sum
///   on the right and with D_max(rho || sigma) on the right), equality with
///   the largest block for block-diagonal pairs, and invariance under
///   tensoring with a projector. Tolerance 1e-8.
MonotoneReport monotone_condition_suite(const BipartiteState& rho_ab, std::uint64_t seed);

}  // namespace qdiv
