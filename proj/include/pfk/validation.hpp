#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pfk {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::vector<std::string> checks;  // one line per sub-check, prefixed ok/FAIL
};

struct ValidationOptions {
  std::uint64_t samples = 1000000;
  std::uint64_t ks_samples = 100000;
  std::uint64_t seed = 20240611;
  unsigned workers = 0;
};

inline constexpr int kCriterionCount = 10;

/// Runs one acceptance criterion (1..kCriterionCount). Exceptions inside a
/// criterion are caught and reported as a failed check.
CriterionResult run_criterion(int id, const ValidationOptions& options);

std::vector<CriterionResult> run_validation(const std::vector<int>& ids, const ValidationOptions& options);

/// Two-sided Kolmogorov-Smirnov critical value for D at the 1% level,
/// asymptotic form 1.6276 / sqrt(n_effective).
double ks_critical_1pct(double n_effective);

/// sup |F_n - F| for sorted samples against a continuous CDF.
template <class Cdf>
double ks_statistic(const std::vector<double>& sorted, Cdf cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = (i + 1) / n - f;
    const double below = f - i / n;
    d = above > d ? above : d;
    d = below > d ? below : d;
  }
  return d;
}

/// Two-sample statistic sup |F_a - F_b|; both inputs sorted.
double ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace pfk
