#include "pfk/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pfk/errors.hpp"
#include "pfk/format.hpp"
#include "pfk/quadrature.hpp"

namespace pfk {

namespace {

void validate_moment_inputs(const Kernel& kernel, double t) {
  if (kernel.is_signed()) {
    throw Unsupported("moment formulas need a non-negative kernel; " + kernel.describe() + " is signed");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be non-negative and finite");
}

void check_point(const Kernel& kernel, const Point& p) {
  if (p.dim() != kernel.dimension()) throw std::invalid_argument("moment point has the wrong dimension");
}

std::string points_echo(std::span<const Point> points) {
  std::string out;
  for (const Point& p : points) {
    out += out.empty() ? "(" : " (";
    for (int i = 0; i < p.dim(); ++i) out += (i ? "," : "") + format_number(p[i]);
    out += ")";
  }
  return out;
}

EstimatorResult deterministic_result(double value, const MonteCarloOptions& mc, double t,
                                     std::span<const Point> points, std::string config) {
  EstimatorResult result;
  result.mean = value;
  result.seed = mc.seed;
  result.horizon = t;
  result.points.assign(points.begin(), points.end());
  result.config = std::move(config);
  return result;
}

}  // namespace

SampleRecord second_moment_sample(const Kernel& kernel, const CovarianceSpec& covariance, const ScalarField& w,
                                  double t, const Point& x, const Point& y, SampleStream& stream,
                                  SecondMomentScratch& scratch) {
  sample_poisson_times(1.0, t, stream, scratch.times);
  renew_positions(kernel, x, scratch.times, stream, scratch.first);
  renew_positions(kernel, y, scratch.times, stream, scratch.second);

  const std::size_t jumps = scratch.times.size();
  const double last = jumps ? scratch.times.back() : 0.0;
  const Point& end1 = jumps ? scratch.first.back() : x;
  const Point& end2 = jumps ? scratch.second.back() : y;
  double weight = std::exp(t) * w(t - last, end1) * w(t - last, end2);
  double previous = 0.0;
  for (std::size_t i = 0; i < jumps && weight != 0.0; ++i) {
    const double mass = kernel.total_variation_mass(scratch.times[i] - previous);
    weight *= mass * mass * covariance(scratch.first[i] - scratch.second[i]);
    previous = scratch.times[i];
  }
  return {weight, 0.0, static_cast<std::uint32_t>(jumps)};
}

EstimatorResult estimate_second_moment(const Kernel& kernel, const CovarianceSpec& covariance,
                                       const ScalarField& w, double t, const Point& x, const Point& y,
                                       const MonteCarloOptions& mc) {
  validate_moment_inputs(kernel, t);
  check_point(kernel, x);
  check_point(kernel, y);
  const Point pts[] = {x, y};
  std::string config = "moment order=2 " + kernel.describe() + " f=" + covariance.describe() + " w=" + w.describe();
  if (t == 0.0) return deterministic_result(w(0.0, x) * w(0.0, y), mc, t, pts, std::move(config));

  const MonteCarloSummary summary = run_monte_carlo(mc, [&] {
    return [&, scratch = SecondMomentScratch{}](SampleStream& stream) mutable {
      return second_moment_sample(kernel, covariance, w, t, x, y, stream, scratch);
    };
  });
  EstimatorResult result = make_result(summary, mc);
  result.horizon = t;
  result.points.assign(std::begin(pts), std::end(pts));
  result.config = std::move(config);
  return result;
}

SampleRecord nth_moment_sample(const Kernel& kernel, const CovarianceSpec& covariance, const ScalarField& w,
                               double t, std::span<const Point> points, SampleStream& stream,
                               NthMomentScratch& scratch) {
  const int n = static_cast<int>(points.size());
  sample_pair_clock(n, t, stream, scratch.clock);
  build_multi_paths(kernel, scratch.clock, points, stream, scratch.paths);
  const PairClock& clock = scratch.clock;
  const MultiPaths& paths = scratch.paths;

  double weight = std::exp(t * static_cast<double>(clock.pair_count()));
  for (const PairEvent& e : clock.events) {
    if (weight == 0.0) break;
    weight *= covariance(paths.at(e.first, e.first_slot) - paths.at(e.second, e.second_slot));
  }
  for (int l = 0; l < n && weight != 0.0; ++l) {
    const auto& times = clock.per_index_times[l];
    double previous = 0.0;
    for (double time : times) {
      weight *= kernel.total_variation_mass(time - previous);
      previous = time;
    }
    weight *= w(t - previous, paths.last_position(l));
  }
  return {weight, 0.0, static_cast<std::uint32_t>(clock.events.size())};
}

EstimatorResult estimate_nth_moment(const Kernel& kernel, const CovarianceSpec& covariance, const ScalarField& w,
                                    double t, std::span<const Point> points, const MonteCarloOptions& mc,
                                    const MomentOptions& options) {
  validate_moment_inputs(kernel, t);
  const int n = static_cast<int>(points.size());
  if (n < 2) throw std::invalid_argument("moment order must be at least 2");
  if (n > kMaxMomentOrder && !options.allow_high_order) {
    throw std::invalid_argument("moment order " + std::to_string(n) + " exceeds " + std::to_string(kMaxMomentOrder) +
                                "; pass the high-order override to proceed");
  }
  for (const Point& p : points) check_point(kernel, p);
  std::string config = "moment order=" + std::to_string(n) + " " + kernel.describe() + " f=" +
                       covariance.describe() + " w=" + w.describe() + " points=" + points_echo(points);
  if (t == 0.0) {
    double product = 1.0;
    for (const Point& p : points) product *= w(0.0, p);
    return deterministic_result(product, mc, t, points, std::move(config));
  }

  const MonteCarloSummary summary = run_monte_carlo(mc, [&] {
    return [&, scratch = NthMomentScratch{}](SampleStream& stream) mutable {
      return nth_moment_sample(kernel, covariance, w, t, points, stream, scratch);
    };
  });
  EstimatorResult result = make_result(summary, mc);
  result.horizon = t;
  result.points.assign(points.begin(), points.end());
  result.config = std::move(config);
  if (n > kMaxMomentOrder) result.warnings.push_back("moment order above the default cap; expect large errors");
  return result;
}

namespace {

AdmissibilityResult integrate_radially(const Kernel& kernel, const std::function<double(double)>& density,
                                       double horizon, const AdmissibilityOptions& options) {
  if (!kernel.has_fourier_transform()) {
    throw Unsupported("admissibility needs a Fourier transform; not provided for " + kernel.describe());
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("T must be positive and finite");
  const double area = unit_sphere_area(kernel.dimension());
  const int d = kernel.dimension();
  auto integrand = [&](double r) {
    const double m = density(r);
    if (m == 0.0) return 0.0;
    return area * std::pow(r, d - 1) * m * kernel.time_integrated_fourier_power(horizon, r);
  };

  AdmissibilityResult result;
  double total = integrate_adaptive(integrand, 0.0, 1.0, 1e-13);
  double radius = 1.0;
  int calm = 0;
  while (true) {
    // Panels track the oscillation period pi / T of the wave power.
    const double cycles = horizon * radius / std::numbers::pi;
    const int panels = static_cast<int>(std::clamp(std::ceil(cycles) + 4.0, 4.0, 4096.0));
    const double piece = integrate_composite(integrand, radius, 2.0 * radius, panels);
    const double previous = total;
    total += piece;
    radius *= 2.0;
    ++result.doublings;
    const double change = total != 0.0 ? std::abs(total - previous) / std::abs(total) : 0.0;
    result.relative_change = change;
    calm = change < options.rel_tol ? calm + 1 : 0;
    if (calm >= 2) break;
    if (radius >= options.max_radius) {
      result.divergent = true;
      break;
    }
  }
  result.value = total;
  result.radius = radius;
  if (total == 0.0) result.relative_change = 0.0;
  return result;
}

}  // namespace

AdmissibilityResult check_admissibility(const Kernel& kernel, const CovarianceSpec& covariance, double horizon,
                                        const AdmissibilityOptions& options) {
  const int d = kernel.dimension();
  if (covariance.is_atom()) {
    if (!kernel.has_fourier_transform()) {
      throw Unsupported("admissibility needs a Fourier transform; not provided for " + kernel.describe());
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("T must be positive and finite");
    AdmissibilityResult result;
    result.value = covariance.atom_mass() * kernel.time_integrated_fourier_power(horizon, 0.0);
    return result;
  }
  return integrate_radially(
      kernel, [&](double r) { return covariance.spectral_density(r, d); }, horizon, options);
}

AdmissibilityResult check_admissibility(const Kernel& kernel, const std::function<double(double)>& radial_density,
                                        double horizon, const AdmissibilityOptions& options) {
  return integrate_radially(kernel, radial_density, horizon, options);
}

}  // namespace pfk
