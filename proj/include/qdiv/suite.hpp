#pragma once

// Randomized property suite. Every check draws its instances from a stream
// derived from (seed, check name, trial index), so reports are reproducible
// byte for byte.

#include <qdiv/io.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qdiv {

struct SuiteConfig {
  std::uint64_t seed = 42;
  int trials = 100;
  std::vector<int> dims{2, 3, 4, 5, 6};
  std::map<std::string, double> tolerance;  // per-check overrides; key "*" applies to all
  std::vector<std::string> only;            // run just these checks when nonempty

  void validate() const;
};

struct CheckResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst_violation = 0.0;
  double tolerance = 0.0;
};

struct SuiteReport {
  std::vector<CheckResult> checks;  // sorted by name
  bool pass = true;

  Json to_json() const;
};

/// Names of all checks, sorted.
std::vector<std::string> suite_check_names();

SuiteReport run_suite(const SuiteConfig& config);

}  // namespace qdiv
