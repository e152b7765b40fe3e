#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "pfk/errors.hpp"
#include "pfk/oracles.hpp"
#include "pfk/quadrature.hpp"

namespace pfk {

namespace {

void validate_grid(const Grid1D& g) {
  if (g.nx < 3 || g.nt < 2) throw std::invalid_argument("FD grid needs nx >= 3 and nt >= 2");
  if (!(g.x_max > g.x_min)) throw std::invalid_argument("FD grid needs x_max > x_min");
  if (!(g.horizon > 0.0) || !std::isfinite(g.horizon)) throw std::invalid_argument("FD grid needs a positive horizon");
}

// Second difference with mirrored ghost points (zero flux).
void second_difference(std::span<const double> u, double dx, std::span<double> out) {
  const std::size_t n = u.size();
  const double inv = 1.0 / (dx * dx);
  out[0] = 2.0 * (u[1] - u[0]) * inv;
  for (std::size_t k = 1; k + 1 < n; ++k) out[k] = (u[k - 1] - 2.0 * u[k] + u[k + 1]) * inv;
  out[n - 1] = 2.0 * (u[n - 2] - u[n - 1]) * inv;
}

// Solves (I - beta * D2) u = rhs for the zero-flux second difference (Thomas).
void solve_implicit(double beta, double dx, std::vector<double>& rhs) {
  const std::size_t n = rhs.size();
  const double r = beta / (dx * dx);
  std::vector<double> lower(n, -r), diag(n, 1.0 + 2.0 * r), upper(n, -r);
  upper[0] = -2.0 * r;
  lower[n - 1] = -2.0 * r;
  for (std::size_t k = 1; k < n; ++k) {
    const double factor = lower[k] / diag[k - 1];
    diag[k] -= factor * upper[k - 1];
    rhs[k] -= factor * rhs[k - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) rhs[k] = (rhs[k] - upper[k] * rhs[k + 1]) / diag[k];
}

}  // namespace

Grid1D default_fd_grid(Equation equation, double t, double x_lo, double x_hi) {
  if (!(t > 0.0)) throw std::invalid_argument("default_fd_grid needs t > 0");
  const bool heat = equation == Equation::Heat;
  const double reach = heat ? 8.0 * std::sqrt(t) + 2.0 : t + 1.0;
  const double dx = heat ? 0.02 : 0.005;
  Grid1D g;
  g.x_min = x_lo - reach;
  const int cells = static_cast<int>(std::ceil((x_hi + reach - g.x_min) / dx));
  g.nx = cells + 1;
  g.x_max = g.x_min + cells * dx;
  g.nt = std::max(2, static_cast<int>(std::ceil(400.0 * t)));
  g.horizon = t;
  return g;
}

double FdSolution::value_at(double t, double x) const {
  const double s = std::clamp(t / grid.dt(), 0.0, static_cast<double>(grid.nt));
  int level = static_cast<int>(s);
  if (level >= grid.nt) level = grid.nt - 1;
  const double frac = s - level;
  const auto row = [&](int l) {
    return std::span<const double>(values.data() + static_cast<std::size_t>(l) * grid.nx, grid.nx);
  };
  const double a = cubic_interpolate(row(level), grid.x_min, grid.dx(), x);
  const double b = cubic_interpolate(row(level + 1), grid.x_min, grid.dx(), x);
  return (1.0 - frac) * a + frac * b;
}

FdSolution fd_reference_1d(Equation equation, const ScalarField& potential, const ScalarField& f0,
                           const ScalarField& f1, const Grid1D& grid) {
  validate_grid(grid);
  const int nx = grid.nx;
  const double dx = grid.dx();
  const double dt = grid.dt();
  FdSolution sol{grid, std::vector<double>(static_cast<std::size_t>(grid.nt + 1) * nx)};
  auto level = [&](int l) { return std::span<double>(sol.values.data() + static_cast<std::size_t>(l) * nx, nx); };

  std::vector<double> u0(nx), d2(nx), vu(nx), vu_prev(nx);
  for (int k = 0; k < nx; ++k) u0[k] = f0(0.0, Point{grid.x(k)});
  std::copy(u0.begin(), u0.end(), level(0).begin());
  auto potential_times = [&](double time, std::span<const double> u, std::vector<double>& out) {
    for (int k = 0; k < nx; ++k) out[k] = potential(time, Point{grid.x(k)}) * u[k];
  };

  if (equation == Equation::Heat) {
    // u_t = u_xx / 2 + V u; Crank-Nicolson for diffusion, AB2 for the potential.
    std::vector<double> rhs(nx);
    for (int n = 0; n < grid.nt; ++n) {
      const auto u = level(n);
      second_difference(u, dx, d2);
      potential_times(n * dt, u, vu);
      for (int k = 0; k < nx; ++k) {
        const double source = n == 0 ? vu[k] : 1.5 * vu[k] - 0.5 * vu_prev[k];
        rhs[k] = u[k] + 0.25 * dt * d2[k] + dt * source;
      }
      solve_implicit(0.25 * dt, dx, rhs);
      std::copy(rhs.begin(), rhs.end(), level(n + 1).begin());
      vu_prev.swap(vu);
    }
    return sol;
  }

  if (equation != Equation::Wave) throw Unsupported("fd_reference_1d supports Heat and Wave");
  if (dt > dx) throw std::invalid_argument("wave leapfrog violates the CFL bound dt <= dx");
  // u_tt = u_xx + V u; Taylor start, then leapfrog.
  second_difference(level(0), dx, d2);
  potential_times(0.0, level(0), vu);
  {
    const auto u1 = level(1);
    for (int k = 0; k < nx; ++k) u1[k] = u0[k] + dt * f1(0.0, Point{grid.x(k)}) + 0.5 * dt * dt * (d2[k] + vu[k]);
  }
  for (int n = 1; n < grid.nt; ++n) {
    const auto u = level(n);
    const auto prev = level(n - 1);
    const auto next = level(n + 1);
    second_difference(u, dx, d2);
    potential_times(n * dt, u, vu);
    for (int k = 0; k < nx; ++k) next[k] = 2.0 * u[k] - prev[k] + dt * dt * (d2[k] + vu[k]);
  }
  return sol;
}

}  // namespace pfk
