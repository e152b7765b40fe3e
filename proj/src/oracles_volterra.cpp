#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfk/errors.hpp"
#include "pfk/format.hpp"
#include "pfk/oracles.hpp"

namespace pfk {

namespace {

// Trapezoidal product integration with n steps.
double volterra_trapezoid(const std::vector<double>& mass, double c, double w0, double t, int n) {
  const double h = t / n;
  const int stride = static_cast<int>((mass.size() - 1) / n);
  auto m = [&](int steps) { return mass[static_cast<std::size_t>(steps) * stride]; };
  std::vector<double> u(n + 1);
  u[0] = w0;
  const double diagonal = 1.0 - 0.5 * c * h * m(0);
  if (diagonal == 0.0) throw ConvergenceFailure("volterra step is singular; increase the resolution");
  for (int j = 1; j <= n; ++j) {
    double sum = 0.5 * m(j) * u[0];
    for (int i = 1; i < j; ++i) sum += m(j - i) * u[i];
    u[j] = (w0 + c * h * sum) / diagonal;
  }
  return u[n];
}

}  // namespace

double volterra_constant_reduction(const std::function<double(double)>& mass_profile, double c, double w0, double t,
                                   double rel_tol) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be non-negative and finite");
  if (t == 0.0 || c == 0.0) return w0;
  constexpr int kCoarsest = 32;
  constexpr int kFinest = 8192;
  // Tabulate the mass once at the finest resolution and subsample.
  std::vector<double> mass(kFinest + 1);
  for (int k = 0; k <= kFinest; ++k) mass[k] = mass_profile(t * k / kFinest);

  double previous = volterra_trapezoid(mass, c, w0, t, kCoarsest);
  double previous_extrapolated = 0.0;
  bool have_extrapolated = false;
  for (int n = 2 * kCoarsest; n <= kFinest; n *= 2) {
    const double current = volterra_trapezoid(mass, c, w0, t, n);
    const double extrapolated = (4.0 * current - previous) / 3.0;
    if (have_extrapolated &&
        std::abs(extrapolated - previous_extrapolated) <= rel_tol * std::max(std::abs(extrapolated), 1e-300)) {
      return extrapolated;
    }
    previous = current;
    previous_extrapolated = extrapolated;
    have_extrapolated = true;
  }
  throw ConvergenceFailure("volterra reduction did not reach relative tolerance " + format_number(rel_tol) +
                           " by n = " + std::to_string(kFinest));
}

namespace {

// RK4 for y' = A y with y = (u, u', ..., u^{(p)}) and u^{(p+1)} = a u.
double rk4_monomial(double a, int p, double w0, double t, int steps) {
  const int dim = p + 1;
  std::vector<double> y(dim, 0.0), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  y[0] = w0;
  auto rhs = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (int i = 0; i + 1 < dim; ++i) out[i] = in[i + 1];
    out[dim - 1] = a * in[0];
  };
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    rhs(y, k1);
    for (int i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(tmp, k2);
    for (int i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(tmp, k3);
    for (int i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(tmp, k4);
    for (int i = 0; i < dim; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return y[0];
}

}  // namespace

double monomial_renewal_ode(double a, int p, double w0, double t, double rel_tol) {
  if (p < 0) throw std::invalid_argument("monomial order must be >= 0");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be non-negative and finite");
  if (t == 0.0) return w0;
  double previous = rk4_monomial(a, p, w0, t, 16);
  for (int steps = 32; steps <= (1 << 20); steps *= 2) {
    const double current = rk4_monomial(a, p, w0, t, steps);
    if (std::abs(current - previous) <= rel_tol * std::max(std::abs(current), 1e-300)) return current;
    previous = current;
  }
  throw ConvergenceFailure("RK4 step doubling did not converge");
}

}  // namespace pfk
