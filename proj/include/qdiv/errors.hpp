#pragma once

#include <stdexcept>
#include <string>

namespace qdiv {

// Input violated a type invariant or a precondition (dimension mismatch,
// non-Hermitian matrix, negative eigenvalue, bad file, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative solver hit its iteration cap without meeting its residual
// tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double primal_residual, double dual_residual)
      : std::runtime_error(what + " (primal residual " + std::to_string(primal_residual) +
                           ", dual residual " + std::to_string(dual_residual) + ")"),
        primal_residual_(primal_residual),
        dual_residual_(dual_residual) {}

  double primal_residual() const noexcept { return primal_residual_; }
  double dual_residual() const noexcept { return dual_residual_; }

 private:
  double primal_residual_;
  double dual_residual_;
};

// A constructed certificate failed its own check. Signals numerical breakdown.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qdiv
