#pragma once

#include <string>
#include <vector>

#include "mnlab/optkernel.hpp"

namespace mnlab::checks {

struct CheckResult {
  std::string id;
  std::string expected;
  std::string computed;
  bool pass = false;
  bool gating = true;  // soft diagnostics report without gating
  std::string citation;
};

struct SuiteResult {
  std::string name;
  std::string description;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (c.gating && !c.pass) return false;
    return true;
  }
};

// acceptance criteria, numbered 1..13
constexpr int kCriteria = 13;
SuiteResult run_criterion(int number, const OptimizerConfig& cfg);

// named verification suites grouping the criteria plus the ordering
// invariants: axioms, closedforms, orderings, witnesses, constants,
// classifier, khintchine, growth, all
std::vector<std::string> suite_names();
std::vector<SuiteResult> run_suite(const std::string& name, const OptimizerConfig& cfg);

}  // namespace mnlab::checks
