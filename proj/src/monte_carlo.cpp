#include "pfk/monte_carlo.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace pfk {

RunningStats RunningStats::merge(const RunningStats& a, const RunningStats& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  RunningStats out;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  const double n = static_cast<double>(out.count);
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * (nb / n);
  out.m2 = a.m2 + b.m2 + delta * delta * (na * nb / n);
  return out;
}

double RunningStats::std_error() const {
  if (count < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(count));
}

unsigned default_worker_count() {
  if (const char* env = std::getenv("PFK_WORKERS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace detail {

namespace {

MonteCarloSummary combine(const MonteCarloSummary& a, const MonteCarloSummary& b) {
  MonteCarloSummary out;
  out.weight = RunningStats::merge(a.weight, b.weight);
  out.aux = RunningStats::merge(a.aux, b.aux);
  out.max_jumps = std::max(a.max_jumps, b.max_jumps);
  for (std::size_t m = 0; m < kTrackedJumpCounts; ++m) {
    out.weight_by_jump_count[m] = a.weight_by_jump_count[m] + b.weight_by_jump_count[m];
  }
  out.non_finite = a.non_finite || b.non_finite;
  return out;
}

MonteCarloSummary reduce_range(const std::vector<ChunkPartial>& chunks, std::size_t begin, std::size_t end) {
  if (end - begin == 1) return chunks[begin];
  const std::size_t mid = begin + (end - begin) / 2;
  return combine(reduce_range(chunks, begin, mid), reduce_range(chunks, mid, end));
}

}  // namespace

MonteCarloSummary reduce_chunks(const std::vector<ChunkPartial>& chunks) {
  if (chunks.empty()) return {};
  return reduce_range(chunks, 0, chunks.size());
}

}  // namespace detail

EstimatorResult make_result(const MonteCarloSummary& summary, const MonteCarloOptions& options) {
  EstimatorResult result;
  result.mean = summary.weight.mean;
  result.std_error = summary.weight.std_error();
  result.n_samples = summary.weight.count;
  result.seed = options.seed;
  result.max_jumps = summary.max_jumps;
  const double n = static_cast<double>(summary.weight.count);
  if (n > 0) {
    result.mean_by_jump_count.resize(kTrackedJumpCounts);
    for (std::size_t m = 0; m < kTrackedJumpCounts; ++m) result.mean_by_jump_count[m] = summary.weight_by_jump_count[m] / n;
  }
  if (summary.non_finite) result.warnings.emplace_back("non-finite sample weight encountered");
  return result;
}

}  // namespace pfk
