#pragma once

#include "mcid/io.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace mcid::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Wall-clock limit for the criterion; exceeding it fails the criterion.
  double budget_seconds = 0.0;
  double seconds = 0.0;
  /// Counts, rates and constants measured by the run. Deterministic given the config.
  nlohmann::ordered_json measured;
  /// First failing case, if any.
  std::string failure;
};

struct SuiteOptions {
  io::ExperimentConfig config;
  int threads = 1;
};

inline constexpr int kCriteria = 9;

/// Runs criterion `id` in [1, 9].
CriterionResult run_criterion(int id, const SuiteOptions& options);

std::vector<CriterionResult> run_suite(const SuiteOptions& options, const std::vector<int>& ids);

/// `[PASS] 3 hitting-time bound (0.41 s / 60 s) ...`
std::string summary_line(const CriterionResult& r);

/// Report without timings, so identical configs give identical bytes.
nlohmann::ordered_json report(const SuiteOptions& options, const std::vector<CriterionResult>& results);

}  // namespace mcid::acceptance
