#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace subweibull {

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  long mc_trials = 20000;
  unsigned threads = 0;
  std::uint64_t seed = 20240607;
  bool include_mc = true;
};

// Runs the invariant checks of every module plus the closed-form norm table.
// Checks never throw; an exception inside a check is reported as a failure.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

// Asymptotic two-sample KS critical value at the 1e-3 level.
double ks_critical_001(std::size_t n, std::size_t m);

}  // namespace subweibull
