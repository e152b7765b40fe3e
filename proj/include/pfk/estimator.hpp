#pragma once

#include "pfk/fields.hpp"
#include "pfk/kernels.hpp"
#include "pfk/monte_carlo.hpp"
#include "pfk/paths.hpp"

namespace pfk {

struct SolutionOptions {
  /// Rate of the renewal clock; the potential enters as V / lambda.
  double lambda = 1.0;
  /// Multiply by (-1)^{C_t} for signed kernels. Disabling it is only useful
  /// to demonstrate that the counter matters.
  bool apply_sign_counter = true;
};

/// One sample of
///   e^{lambda t} w(t - tau_N, X_{tau_N}) (-1)^{C_t}
///     prod_i |S|(tau_i - tau_{i-1}) V(t - tau_i, X_{tau_i}) / lambda
/// for the integral equation u = w + int_0^t ds int S(s, dy) V u (t-s, x-y).
/// `scratch` is reused storage for the renewal path.
SampleRecord solution_sample(const Kernel& kernel, const ScalarField& potential, const ScalarField& w, double t,
                             const Point& x, const SolutionOptions& options, SampleStream& stream,
                             RenewalPath& scratch);

/// Monte Carlo estimate of u(t, x). t = 0 returns w(0, x) without sampling.
EstimatorResult estimate_solution(const Kernel& kernel, const ScalarField& potential, const ScalarField& w,
                                  double t, const Point& x, const SolutionOptions& options,
                                  const MonteCarloOptions& mc);

/// Free wave solution w(t, x) = d/dt (S(t) * f0)(x) + (S(t) * f1)(x) for d = 1, 2, 3.
/// d = 1 uses d'Alembert's formula; d = 2 the Poisson disk integral; d = 3
/// Kirchhoff's sphere mean. Time derivatives for d >= 2 are central
/// differences with step 1e-4 t.
ScalarField initial_wave_field(const ScalarField& f0, const ScalarField& f1, int dimension);

}  // namespace pfk
