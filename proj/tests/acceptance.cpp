// Runs every acceptance criterion at its pinned window and prints one
// PASS/FAIL line per criterion. Exit status 0 iff all pass.

#include <algorithm>
#include <cstdio>
#include <map>

#include "pispace/suites.hpp"

int main() {
  using namespace pispace;

  // wall-clock bounds in seconds; criteria without one are unbounded
  const std::map<int, double> bounds{{1, 10.0}, {3, 60.0}, {4, 10.0}};

  std::vector<CriterionResult> all;
  SuiteConfig config;
  for (const auto& name : suite_names()) {
    auto result = run_suite(name, config);
    for (auto& c : result.criteria) all.push_back(std::move(c));
  }
  std::sort(all.begin(), all.end(),
            [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });

  bool ok = true;
  for (const auto& c : all) {
    bool pass = c.passed;
    std::string timing = std::to_string(c.seconds).substr(0, 6) + " s";
    if (auto it = bounds.find(c.id); it != bounds.end()) {
      timing += " (bound " + std::to_string(static_cast<int>(it->second)) + " s)";
      pass = pass && c.seconds < it->second;
    }
    ok = ok && pass;
    std::printf("criterion %d %s  %s: %s [%zu checks, %s]\n", c.id, pass ? "PASS" : "FAIL",
                c.title.c_str(), c.detail.c_str(), c.checks, timing.c_str());
  }
  std::printf("%s\n", ok ? "all criteria passed" : "some criteria FAILED");
  return ok ? 0 : 1;
}
