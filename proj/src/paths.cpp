#include "pfk/paths.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pfk {

namespace {

void check_rate_horizon(double rate, double horizon) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("Poisson rate must be positive and finite");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("Poisson horizon must be non-negative and finite");
  }
}

}  // namespace

void sample_poisson_times(double rate, double horizon, SampleStream& stream, std::vector<double>& out) {
  check_rate_horizon(rate, horizon);
  out.clear();
  double clock = 0.0;
  while (true) {
    clock += stream.exponential(rate);
    if (clock > horizon) return;
    out.push_back(clock);
  }
}

std::vector<double> sample_poisson_times(double rate, double horizon, SampleStream& stream) {
  std::vector<double> out;
  sample_poisson_times(rate, horizon, stream, out);
  return out;
}

void renew_positions(const Kernel& kernel, const Point& origin, std::span<const double> times,
                     SampleStream& stream, std::vector<Point>& out) {
  out.clear();
  Point current = origin;
  double previous = 0.0;
  for (double time : times) {
    current += kernel.sample_increment(time - previous, stream);
    out.push_back(current);
    previous = time;
  }
}

void build_renewal_path(const Kernel& kernel, const Point& origin, double horizon, double rate,
                        SampleStream& stream, RenewalPath& out) {
  if (origin.dim() != kernel.dimension()) throw std::invalid_argument("renewal path origin has wrong dimension");
  out.origin = origin;
  out.horizon = horizon;
  sample_poisson_times(rate, horizon, stream, out.jump_times);
  renew_positions(kernel, origin, out.jump_times, stream, out.positions);
}

RenewalPath build_renewal_path(const Kernel& kernel, const Point& origin, double horizon, double rate,
                               SampleStream& stream) {
  RenewalPath path;
  build_renewal_path(kernel, origin, horizon, rate, stream, path);
  return path;
}

std::pair<int, int> pair_from_index(int n, int k) {
  for (int first = 0; first < n - 1; ++first) {
    const int row = n - 1 - first;
    if (k < row) return {first, first + 1 + k};
    k -= row;
  }
  throw std::out_of_range("pair index out of range");
}

void sample_pair_clock(int n, double horizon, SampleStream& stream, PairClock& out) {
  if (n < 2) throw std::invalid_argument("pair clock needs n >= 2, got " + std::to_string(n));
  const int pairs = n * (n - 1) / 2;
  out.n = n;
  out.horizon = horizon;
  out.events.clear();
  out.per_index_times.resize(n);
  for (auto& times : out.per_index_times) times.clear();

  check_rate_horizon(static_cast<double>(pairs), horizon);
  double clock = 0.0;
  while (true) {
    clock += stream.exponential(static_cast<double>(pairs));
    if (clock > horizon) return;
    int k = static_cast<int>(stream.uniform() * pairs);
    if (k >= pairs) k = pairs - 1;
    const auto [first, second] = pair_from_index(n, k);
    PairEvent event;
    event.time = clock;
    event.first = first;
    event.second = second;
    event.first_slot = out.per_index_times[first].size();
    event.second_slot = out.per_index_times[second].size();
    out.per_index_times[first].push_back(clock);
    out.per_index_times[second].push_back(clock);
    out.events.push_back(event);
  }
}

PairClock sample_pair_clock(int n, double horizon, SampleStream& stream) {
  PairClock clock;
  sample_pair_clock(n, horizon, stream, clock);
  return clock;
}

void build_multi_paths(const Kernel& kernel, const PairClock& clock, std::span<const Point> origins,
                       SampleStream& stream, MultiPaths& out) {
  if (static_cast<int>(origins.size()) != clock.n) {
    throw std::invalid_argument("build_multi_paths: need one origin per index");
  }
  out.origins.assign(origins.begin(), origins.end());
  out.positions.resize(clock.n);
  for (int l = 0; l < clock.n; ++l) {
    if (origins[l].dim() != kernel.dimension()) throw std::invalid_argument("origin has wrong dimension");
    renew_positions(kernel, origins[l], clock.per_index_times[l], stream, out.positions[l]);
  }
}

MultiPaths build_multi_paths(const Kernel& kernel, const PairClock& clock, std::span<const Point> origins,
                             SampleStream& stream) {
  MultiPaths paths;
  build_multi_paths(kernel, clock, origins, stream, paths);
  return paths;
}

}  // namespace pfk
