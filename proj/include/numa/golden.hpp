#pragma once

// The acceptance suite: twelve exact checks, each with a wall-clock budget.

#include <string>
#include <vector>

namespace numa {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;         // checks passed and the budget was met
  bool within_budget = false;
  std::string detail;
  double seconds = 0;
  double budget_seconds = 0;
};

struct GoldenOptions {
  unsigned threads = 1;
};

/// Runs criterion `id` (1..12). Exceptions count as failures.
CriterionResult run_criterion(int id, const GoldenOptions& options = {});
std::vector<CriterionResult> golden_suite(const GoldenOptions& options = {});

inline constexpr int kCriterionCount = 12;

}  // namespace numa
