// Acceptance gate: one PASS/FAIL line per criterion, sub-checks indented below.
// Sample sizes and tolerances are the pinned ValidationOptions defaults.
#include <chrono>
#include <cstdio>
#include <numeric>
#include <vector>

#include "pfk/validation.hpp"

int main() {
  const pfk::ValidationOptions options;
  std::vector<int> ids(pfk::kCriterionCount);
  std::iota(ids.begin(), ids.end(), 1);

  int failures = 0;
  for (int id : ids) {
    const auto start = std::chrono::steady_clock::now();
    const pfk::CriterionResult r = pfk::run_criterion(id, options);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%.1fs)\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), secs);
    for (const auto& line : r.checks) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failures;
  }
  std::printf("%d/%d criteria passed\n", pfk::kCriterionCount - failures, pfk::kCriterionCount);
  return failures == 0 ? 0 : 1;
}
