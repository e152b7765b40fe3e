#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "pfk/point.hpp"
#include "pfk/random.hpp"

namespace pfk {

/// Welford accumulator; `merge` is Chan's pairwise update.
struct RunningStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  static RunningStats merge(const RunningStats& a, const RunningStats& b);

  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double std_error() const;
};

/// Outcome of one Monte Carlo sample. `aux` is an optional second channel
/// (e.g. a coupled control quantity); `jumps` is the number of clock events.
struct SampleRecord {
  double weight = 0.0;
  double aux = 0.0;
  std::uint32_t jumps = 0;
};

inline constexpr std::size_t kTrackedJumpCounts = 16;

struct EstimatorResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  std::vector<Point> points;
  std::string config;
  std::uint32_t max_jumps = 0;
  /// Entry m is the sample mean of weight * 1{N = m}; the entries telescope
  /// to `mean` when no sample has N >= kTrackedJumpCounts.
  std::vector<double> mean_by_jump_count;
  std::vector<std::string> warnings;
};

struct MonteCarloOptions {
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0: default_worker_count()
};

struct MonteCarloSummary {
  RunningStats weight;
  RunningStats aux;
  std::uint32_t max_jumps = 0;
  std::array<double, kTrackedJumpCounts> weight_by_jump_count{};
  bool non_finite = false;
};

/// PFK_WORKERS if set and positive, else the hardware concurrency.
unsigned default_worker_count();

namespace detail {

inline constexpr std::uint64_t kChunkSize = 4096;

using ChunkPartial = MonteCarloSummary;

/// Pairwise tree reduction in chunk-index order.
MonteCarloSummary reduce_chunks(const std::vector<ChunkPartial>& chunks);

}  // namespace detail

/// Evaluates samples 0..n_samples-1, sample i drawing from SampleStream(seed, i).
/// `make_worker()` is called once per thread and must return a callable
/// SampleRecord(SampleStream&); worker-local scratch lives in that callable.
/// Results are bit-identical for any worker count.
template <class MakeWorker>
MonteCarloSummary run_monte_carlo(const MonteCarloOptions& options, MakeWorker make_worker) {
  using detail::kChunkSize;
  const std::uint64_t n = options.n_samples;
  const std::uint64_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<detail::ChunkPartial> partials(n_chunks);
  std::atomic<std::uint64_t> next_chunk{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    try {
      auto sampler = make_worker();
      while (true) {
        const std::uint64_t chunk = next_chunk.fetch_add(1);
        if (chunk >= n_chunks) return;
        detail::ChunkPartial& part = partials[chunk];
        const std::uint64_t begin = chunk * kChunkSize;
        const std::uint64_t end = std::min(n, begin + kChunkSize);
        for (std::uint64_t i = begin; i < end; ++i) {
          SampleStream stream(options.seed, i);
          const SampleRecord record = sampler(stream);
          part.weight.push(record.weight);
          part.aux.push(record.aux);
          part.max_jumps = std::max(part.max_jumps, record.jumps);
          if (record.jumps < kTrackedJumpCounts) part.weight_by_jump_count[record.jumps] += record.weight;
          if (!std::isfinite(record.weight)) part.non_finite = true;
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next_chunk.store(n_chunks);
    }
  };

  unsigned workers = options.workers == 0 ? default_worker_count() : options.workers;
  workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, n_chunks)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return detail::reduce_chunks(partials);
}

/// Fills the shared EstimatorResult fields from a summary.
EstimatorResult make_result(const MonteCarloSummary& summary, const MonteCarloOptions& options);

}  // namespace pfk
