#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pfk {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Composite Gauss-Legendre: `panels` equal panels of `order` nodes each.
double integrate_composite(const std::function<double(double)>& f, double a, double b, int panels,
                           int order = 16);

/// Adaptive Gauss-Kronrod (61 point) integral on [a, b]; `error` receives the
/// estimated absolute error when non-null.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, double* error = nullptr);

/// Four-point Lagrange (cubic) interpolation of samples on the uniform grid
/// x_k = x0 + k*dx. Values are clamped to the end samples outside the grid.
double cubic_interpolate(std::span<const double> values, double x0, double dx, double x);

}  // namespace pfk
