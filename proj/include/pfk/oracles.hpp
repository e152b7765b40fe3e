#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "pfk/fields.hpp"
#include "pfk/kernels.hpp"
#include "pfk/moments.hpp"
#include "pfk/monte_carlo.hpp"

namespace pfk {

// Deterministic reference solvers. Everything here is single-threaded and
// independent of the Monte Carlo code paths it is used to check.

struct Grid1D {
  double x_min = 0.0;
  double x_max = 0.0;
  int nx = 0;
  int nt = 0;
  double horizon = 0.0;

  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dt() const { return horizon / nt; }
  double x(int k) const { return x_min + k * dx(); }
};

/// Resolution of the iterated-quadrature oracles. The spatial domain is built
/// around the evaluation point from the kernel's reach.
struct SeriesGrid {
  int nt = 32;                  // time steps on [0, t]
  double dx = 0.05;             // spatial lattice spacing
  int nodes = 41;               // per-convolution quadrature nodes
  double tail_tolerance = 1e-5; // max allowed truncation bound
  bool estimate_error = true;   // rerun at half resolution
};

struct SeriesResult {
  double value = 0.0;
  std::vector<double> terms;       // per-order contributions at (t, x)
  double tail_bound = 0.0;         // bound on the omitted orders
  double quadrature_error = 0.0;   // |fine - half resolution|, 0 if not estimated
};

/// Sum of the iterates H_0..H_{m_max} at (t, x) for Heat or Wave d = 1:
///   H_0 = w,  H_{m+1}(s, y) = int_0^s dr int S(r, dz) V(s-r, y-z) H_m(s-r, y-z).
/// Throws ConvergenceFailure (naming the needed order) when the tail bound
/// exceeds grid.tail_tolerance.
SeriesResult picard_series_1d(const Kernel& kernel, const ScalarField& potential, const ScalarField& w, double t,
                              double x, int m_max, const SeriesGrid& grid = {});

/// Sum of G_0..G_{m_max}, the chaos-order contributions to E[u(t,x) u(t,y)]
/// with constant w, computed in the difference variable x - y.
SeriesResult second_moment_recursion_1d(const Kernel& kernel, const CovarianceSpec& covariance, double w, double t,
                                        double x, double y, int m_max, const SeriesGrid& grid = {});

/// Smallest order whose tail bound is below `tolerance` for the monomial
/// majorant a^m t^{m(p+1)} / (m(p+1))!; used by the tail checks above.
int required_series_order(double a, int p, double t, double scale, double tolerance);

/// Bound on sum_{m > m_max} scale * a^m t^{m(p+1)} / (m(p+1))!.
double monomial_tail_bound(double a, int p, double t, double scale, int m_max);

void write_terms_csv(const std::filesystem::path& path, const std::vector<double>& terms);

/// u(t) = w0 + c int_0^t mass(s) u(t - s) ds by trapezoidal product
/// integration with step halving and Richardson extrapolation to relative
/// tolerance `rel_tol`. Throws ConvergenceFailure if the tolerance is not met.
double volterra_constant_reduction(const std::function<double(double)>& mass_profile, double c, double w0, double t,
                                   double rel_tol = 1e-8);

/// Solution of u^{(p+1)} = a u, u(0) = w0, u'(0) = ... = u^{(p)}(0) = 0, by
/// classical RK4 with step doubling. Equivalent to the renewal equation
/// u = w0 + (a / p!) int_0^t s^p u(t - s) ds.
double monomial_renewal_ode(double a, int p, double w0, double t, double rel_tol = 1e-10);

struct ClassicalFkResult {
  EstimatorResult estimate;
  double bias_estimate = 0.0;  // mean(fine - coarse) from the coupled half-step run
  double bias_bound = 0.0;     // |bias_estimate| + 2 standard errors
};

/// E[f0(B_t) exp(int_0^t V(t - s, B_s) ds)] for standard Brownian motion from
/// x, with the time integral as a left-endpoint sum over n_time_steps steps.
/// A coupled run with half as many steps estimates the discretization bias.
ClassicalFkResult classical_fk_heat(const ScalarField& potential, const ScalarField& f0, double t, const Point& x,
                                    int n_time_steps, const MonteCarloOptions& mc);

struct FdSolution {
  Grid1D grid;
  std::vector<double> values;  // row-major [time level][x index]

  double at(int level, int k) const { return values[static_cast<std::size_t>(level) * grid.nx + k]; }
  /// Linear in time, cubic in space.
  double value_at(double t, double x) const;
};

/// Grid wide enough that boundary effects at points in [x_lo, x_hi] stay
/// negligible up to time t: heat dx = 0.02, wave dx = 0.005, dt = t / ceil(400 t).
Grid1D default_fd_grid(Equation equation, double t, double x_lo, double x_hi);

/// Heat u_t = u_xx / 2 + V u (Crank-Nicolson, V explicit by Adams-Bashforth 2)
/// or wave u_tt = u_xx + V u (leapfrog), zero-flux boundaries. f1 is ignored
/// for heat. Throws std::invalid_argument when the wave CFL bound dt <= dx fails.
FdSolution fd_reference_1d(Equation equation, const ScalarField& potential, const ScalarField& f0,
                           const ScalarField& f1, const Grid1D& grid);

}  // namespace pfk
