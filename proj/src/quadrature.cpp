#include "pfk/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pfk {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

double integrate_composite(const std::function<double(double)>& f, double a, double b, int panels,
                           int order) {
  const QuadratureRule base = gauss_legendre(order);
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    double panel_sum = 0.0;
    for (int i = 0; i < order; ++i) panel_sum += base.weights[i] * f(mid + 0.5 * width * base.nodes[i]);
    total += 0.5 * width * panel_sum;
  }
  return total;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                          double* error) {
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, rel_tol, &err);
  if (error) *error = err;
  return value;
}

double cubic_interpolate(std::span<const double> values, double x0, double dx, double x) {
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  const double s = (x - x0) / dx;
  if (s <= 0.0) return values.front();
  if (s >= static_cast<double>(n - 1)) return values.back();
  auto k = static_cast<std::ptrdiff_t>(s);
  if (n < 4) {
    const double frac = s - static_cast<double>(k);
    return values[k] + frac * (values[k + 1] - values[k]);
  }
  // Stencil k-1..k+2, shifted inward at the ends.
  std::ptrdiff_t first = k - 1;
  if (first < 0) first = 0;
  if (first > n - 4) first = n - 4;
  const double u = s - static_cast<double>(first);
  const double f0 = values[first];
  const double f1 = values[first + 1];
  const double f2 = values[first + 2];
  const double f3 = values[first + 3];
  const double l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
  const double l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
  const double l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
  const double l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
  return l0 * f0 + l1 * f1 + l2 * f2 + l3 * f3;
}

}  // namespace pfk
