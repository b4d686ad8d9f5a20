#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pispace/report.hpp"
#include "pispace/space.hpp"

namespace pispace {

struct SuiteConfig {
  /// Unset fields fall back to each criterion's pinned window.
  std::optional<std::size_t> depth;
  std::optional<Nat> breadth;
  std::uint64_t seed = 1;
  /// Restricts finite-space suites to this space instead of all small spaces.
  std::optional<FiniteSpaceModel> space;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  /// Number of individual checks that were decided.
  std::size_t checks = 0;
  std::string detail;
  /// Wall time; kept out of the JSON so reports stay reproducible.
  double seconds = 0;
};

struct SuiteResult {
  std::string suite;
  std::vector<CriterionResult> criteria;
  std::vector<Report> reports;

  bool passed() const;
  nlohmann::json to_json(const SuiteConfig& config) const;
};

/// cylinders-oracle, choquet-finite, lusin, schemes-vg, choquet-extract,
/// selectors.
const std::vector<std::string>& suite_names();

/// Throws ConfigError for an unknown suite.
SuiteResult run_suite(const std::string& name, const SuiteConfig& config);

}  // namespace pispace
