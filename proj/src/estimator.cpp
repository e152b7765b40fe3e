#include "pfk/estimator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pfk/format.hpp"

namespace pfk {

namespace {

// Weights whose logarithmic magnitude could pass this are flagged.
constexpr double kOverflowLogThreshold = 700.0;

void validate_solution_inputs(const Kernel& kernel, double t, const Point& x, const SolutionOptions& options) {
  if (!(options.lambda > 0.0) || !std::isfinite(options.lambda)) {
    throw std::invalid_argument("lambda must be positive and finite");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be non-negative and finite");
  if (x.dim() != kernel.dimension()) throw std::invalid_argument("evaluation point has the wrong dimension");
}

}  // namespace

SampleRecord solution_sample(const Kernel& kernel, const ScalarField& potential, const ScalarField& w, double t,
                             const Point& x, const SolutionOptions& options, SampleStream& stream,
                             RenewalPath& scratch) {
  const double lambda = options.lambda;
  build_renewal_path(kernel, x, t, lambda, stream, scratch);
  const std::size_t jumps = scratch.jump_count();

  double weight = std::exp(lambda * t) * w(t - scratch.last_time(), scratch.last_position());
  double previous_time = 0.0;
  const Point* previous_position = &scratch.origin;
  const bool track_sign = options.apply_sign_counter && kernel.is_signed();
  for (std::size_t i = 0; i < jumps && weight != 0.0; ++i) {
    const double gap = scratch.jump_times[i] - previous_time;
    const Point& position = scratch.positions[i];
    double factor = kernel.total_variation_mass(gap) / lambda * potential(t - scratch.jump_times[i], position);
    if (track_sign && kernel.increment_sign(gap, position - *previous_position) < 0) factor = -factor;
    weight *= factor;
    previous_time = scratch.jump_times[i];
    previous_position = &position;
  }
  return {weight, 0.0, static_cast<std::uint32_t>(jumps)};
}

EstimatorResult estimate_solution(const Kernel& kernel, const ScalarField& potential, const ScalarField& w,
                                  double t, const Point& x, const SolutionOptions& options,
                                  const MonteCarloOptions& mc) {
  validate_solution_inputs(kernel, t, x, options);
  std::ostringstream config;
  config << "solve " << kernel.describe() << " V=" << potential.describe() << " w=" << w.describe()
         << " lambda=" << format_number(options.lambda);
  if (!options.apply_sign_counter) config << " sign-counter=off";

  if (t == 0.0) {
    EstimatorResult result;
    result.mean = w(0.0, x);
    result.seed = mc.seed;
    result.points = {x};
    result.config = config.str();
    return result;
  }

  const MonteCarloSummary summary = run_monte_carlo(mc, [&] {
    return [&, scratch = RenewalPath{}](SampleStream& stream) mutable {
      return solution_sample(kernel, potential, w, t, x, options, stream, scratch);
    };
  });

  EstimatorResult result = make_result(summary, mc);
  result.horizon = t;
  result.points = {x};
  result.config = config.str();

  const double v_bound = potential.bound(t);
  if (v_bound > 0.0 && result.max_jumps > 0) {
    const double per_jump = std::log(v_bound * kernel.max_mass(t) / options.lambda);
    const double log_bound = options.lambda * t + std::log(std::max(w.bound(t), 1e-300)) + result.max_jumps * per_jump;
    if (log_bound > kOverflowLogThreshold) {
      std::ostringstream msg;
      msg << "overflow risk: weight bound e^" << log_bound << " at " << result.max_jumps
          << " jumps; consider a larger lambda";
      result.warnings.push_back(msg.str());
    }
  }
  return result;
}

}  // namespace pfk
