// One line per criterion: PASS/FAIL, id, name, elapsed vs budget, detail.
// Exit status is nonzero if any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "numa/golden.hpp"

int main() {
  numa::GoldenOptions options;
  if (const char* t = std::getenv("NUMA_THREADS")) options.threads = static_cast<unsigned>(std::stoul(t));
  int failures = 0;
  for (const auto& r : numa::golden_suite(options)) {
    std::printf("%s %2d %-34s %7.2fs / %3.0fs  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                r.budget_seconds, r.detail.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failures;
  }
  std::printf("%d of %d criteria passed\n", numa::kCriterionCount - failures, numa::kCriterionCount);
  return failures == 0 ? 0 : 1;
}
