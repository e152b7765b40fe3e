#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pfk/kernels.hpp"
#include "pfk/point.hpp"
#include "pfk/random.hpp"

namespace pfk {

/// Jump times of a rate-`rate` Poisson process on (0, horizon], ascending.
std::vector<double> sample_poisson_times(double rate, double horizon, SampleStream& stream);
void sample_poisson_times(double rate, double horizon, SampleStream& stream, std::vector<double>& out);

/// Positions of a process that restarts from its current position at each of
/// `times`, with an independent kernel increment over every gap (the first
/// gap starts at time 0). Only the positions at the renewal times are kept.
void renew_positions(const Kernel& kernel, const Point& origin, std::span<const double> times,
                     SampleStream& stream, std::vector<Point>& out);

struct RenewalPath {
  Point origin;
  double horizon = 0.0;
  std::vector<double> jump_times;  // tau_1 < ... < tau_N in (0, horizon]
  std::vector<Point> positions;    // X at tau_1 .. tau_N

  std::size_t jump_count() const { return jump_times.size(); }
  double last_time() const { return jump_times.empty() ? 0.0 : jump_times.back(); }
  const Point& last_position() const { return positions.empty() ? origin : positions.back(); }
};

RenewalPath build_renewal_path(const Kernel& kernel, const Point& origin, double horizon, double rate,
                               SampleStream& stream);

/// Same, reusing the storage of `out`.
void build_renewal_path(const Kernel& kernel, const Point& origin, double horizon, double rate,
                        SampleStream& stream, RenewalPath& out);

/// One event of the pairwise clock: time sigma_i and the unordered pair
/// R^i = {first, second} (0-based, first < second). The slots locate the event
/// inside the per-index jump-time lists.
struct PairEvent {
  double time = 0.0;
  int first = 0;
  int second = 0;
  std::size_t first_slot = 0;
  std::size_t second_slot = 0;
};

/// Superposition of independent rate-one clocks, one per unordered pair of
/// {0..n-1}: a single rate n(n-1)/2 process whose events carry uniform pair
/// marks.
struct PairClock {
  int n = 0;
  double horizon = 0.0;
  std::vector<PairEvent> events;
  std::vector<std::vector<double>> per_index_times;  // tau^l_1 < tau^l_2 < ...

  std::size_t pair_count() const { return static_cast<std::size_t>(n) * (n - 1) / 2; }
};

PairClock sample_pair_clock(int n, double horizon, SampleStream& stream);
void sample_pair_clock(int n, double horizon, SampleStream& stream, PairClock& out);

/// Pair (first, second) for the k-th unordered pair in lexicographic order.
std::pair<int, int> pair_from_index(int n, int k);

/// positions[l][j] is X^l at per_index_times[l][j].
struct MultiPaths {
  std::vector<Point> origins;
  std::vector<std::vector<Point>> positions;

  const Point& at(int index, std::size_t slot) const { return positions[index][slot]; }
  const Point& last_position(int index) const {
    return positions[index].empty() ? origins[index] : positions[index].back();
  }
};

MultiPaths build_multi_paths(const Kernel& kernel, const PairClock& clock, std::span<const Point> origins,
                             SampleStream& stream);
void build_multi_paths(const Kernel& kernel, const PairClock& clock, std::span<const Point> origins,
                       SampleStream& stream, MultiPaths& out);

}  // namespace pfk
