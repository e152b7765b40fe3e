#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

#include "pfk/errors.hpp"
#include "pfk/format.hpp"
#include "pfk/oracles.hpp"
#include "pfk/quadrature.hpp"

namespace pfk {

namespace {

// Convolution with one of the three 1-d densities the recursions need.
// Heat iterates see N(0, r) (or N(0, 2r) for the difference of two paths),
// the wave iterates the uniform kernel of mass r, and the wave second moment
// the triangle S(r) * S(r) of mass r^2.
class Convolver {
 public:
  enum class Shape { Gaussian, Box, Triangle };

  Convolver(Shape shape, double variance_rate, int nodes) : shape_(shape), variance_rate_(variance_rate) {
    switch (shape) {
      case Shape::Gaussian: {
        // Trapezoid in the standardized variable; exponentially accurate.
        const double h = 16.0 / (nodes - 1);
        for (int q = 0; q < nodes; ++q) {
          const double u = -8.0 + q * h;
          rule_.nodes.push_back(u);
          rule_.weights.push_back(h * std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi));
        }
        break;
      }
      case Shape::Box: rule_ = gauss_legendre(nodes, -1.0, 1.0); break;
      case Shape::Triangle: rule_ = gauss_legendre(nodes, 0.0, 1.0); break;
    }
  }

  // Half-width of the region in which the density of K_t is non-negligible.
  double reach(double t) const {
    switch (shape_) {
      case Shape::Gaussian: return 8.0 * std::sqrt(variance_rate_ * t);
      case Shape::Box: return t;
      case Shape::Triangle: return 2.0 * t;
    }
    return 0.0;
  }

  template <class G>
  double apply(double r, double y, const G& g) const {
    if (r == 0.0) return shape_ == Shape::Gaussian ? g(y) : 0.0;
    double sum = 0.0;
    switch (shape_) {
      case Shape::Gaussian: {
        const double scale = std::sqrt(variance_rate_ * r);
        for (std::size_t q = 0; q < rule_.nodes.size(); ++q) sum += rule_.weights[q] * g(y - scale * rule_.nodes[q]);
        return sum;
      }
      case Shape::Box:
        for (std::size_t q = 0; q < rule_.nodes.size(); ++q) sum += rule_.weights[q] * g(y - r * rule_.nodes[q]);
        return 0.5 * r * sum;
      case Shape::Triangle:
        // int_0^{2r} (2r - v)/4 [g(y - v) + g(y + v)] dv with v = 2 r s.
        for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
          const double v = 2.0 * r * rule_.nodes[q];
          sum += rule_.weights[q] * (1.0 - rule_.nodes[q]) * (g(y - v) + g(y + v));
        }
        return r * r * sum;
    }
    return 0.0;
  }

 private:
  Shape shape_;
  double variance_rate_;
  QuadratureRule rule_;
};

// Weights for the integral over j uniform intervals: trapezoid for j = 1,
// Simpson for even j, Simpson plus a closing 3/8 panel for odd j >= 3.
std::vector<double> time_weights(int j) {
  std::vector<double> w(j + 1, 0.0);
  if (j == 0) return w;
  if (j == 1) {
    w[0] = w[1] = 0.5;
    return w;
  }
  const int simpson_end = j % 2 == 0 ? j : j - 3;
  for (int i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += 1.0 / 3.0;
    w[i + 1] += 4.0 / 3.0;
    w[i + 2] += 1.0 / 3.0;
  }
  if (simpson_end != j) {
    const int i = simpson_end;
    w[i] += 3.0 / 8.0;
    w[i + 1] += 9.0 / 8.0;
    w[i + 2] += 9.0 / 8.0;
    w[i + 3] += 3.0 / 8.0;
  }
  return w;
}

struct RecursionProblem {
  Convolver convolver;
  std::function<double(double, double)> multiplier;  // V(s, y) or f(y)
  std::function<double(double, double)> base;        // H_0(s, y)
};

// Per-order values at (t, center) of H_{m+1}(s, y) = int_0^s dr (K_r * (mult H_m)(s - r))(y).
std::vector<double> iterate(const RecursionProblem& problem, double t, double center, int m_max, int nt, double dx) {
  const double dt = t / nt;
  const double half = problem.convolver.reach(t) + 8.0 * dx + 0.5;
  const int K = static_cast<int>(std::ceil(half / dx));
  const int nx = 2 * K + 1;
  const double x0 = center - K * dx;

  std::vector<double> terms;
  std::vector<double> h(static_cast<std::size_t>(nt + 1) * nx);
  for (int j = 0; j <= nt; ++j)
    for (int k = 0; k < nx; ++k) h[j * nx + k] = problem.base(j * dt, x0 + k * dx);
  terms.push_back(h[nt * nx + K]);
  if (m_max == 0) return terms;

  std::vector<double> g(h.size());
  std::vector<std::vector<double>> weights(nt + 1);
  for (int j = 0; j <= nt; ++j) weights[j] = time_weights(j);

  for (int m = 1; m <= m_max; ++m) {
    for (int j = 0; j <= nt; ++j)
      for (int k = 0; k < nx; ++k) g[j * nx + k] = problem.multiplier(j * dt, x0 + k * dx) * h[j * nx + k];

    auto value_at = [&](int j, int k) {
      double sum = 0.0;
      const double y = x0 + k * dx;
      for (int i = 0; i <= j; ++i) {
        if (weights[j][i] == 0.0) continue;
        const std::span<const double> row(g.data() + static_cast<std::size_t>(i) * nx, nx);
        const double r = (j - i) * dt;
        sum += weights[j][i] * problem.convolver.apply(r, y, [&](double z) { return cubic_interpolate(row, x0, dx, z); });
      }
      return sum * dt;
    };

    if (m == m_max) {
      terms.push_back(value_at(nt, K));  // the last order is only needed at (t, center)
      break;
    }
    std::vector<double> next(h.size(), 0.0);
    for (int j = 1; j <= nt; ++j)
      for (int k = 0; k < nx; ++k) next[j * nx + k] = value_at(j, k);
    h.swap(next);
    terms.push_back(h[nt * nx + K]);
  }
  return terms;
}

double sum_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

void check_series_grid(const SeriesGrid& grid, double t, int m_max) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("series oracle needs t > 0");
  if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
  if (grid.nt < 2 || grid.nt % 2 != 0) throw std::invalid_argument("series grid needs an even nt >= 2");
  if (!(grid.dx > 0.0) || grid.nodes < 3) throw std::invalid_argument("series grid needs dx > 0 and >= 3 nodes");
}

SeriesResult run_series(const RecursionProblem& problem, double t, double center, int m_max,
                        const SeriesGrid& grid, double tail_a, int tail_p, double tail_scale) {
  check_series_grid(grid, t, m_max);
  SeriesResult result;
  result.tail_bound = monomial_tail_bound(tail_a, tail_p, t, tail_scale, m_max);
  if (result.tail_bound > grid.tail_tolerance) {
    const int needed = required_series_order(tail_a, tail_p, t, tail_scale, grid.tail_tolerance);
    throw ConvergenceFailure("series tail bound " + format_number(result.tail_bound) + " exceeds tolerance " +
                             format_number(grid.tail_tolerance) + "; m_max >= " + std::to_string(needed) +
                             " is required");
  }
  result.terms = iterate(problem, t, center, m_max, grid.nt, grid.dx);
  result.value = sum_of(result.terms);
  if (grid.estimate_error) {
    const auto coarse = iterate(problem, t, center, m_max, grid.nt / 2, 2.0 * grid.dx);
    result.quadrature_error = std::abs(result.value - sum_of(coarse));
  }
  return result;
}

}  // namespace

double monomial_tail_bound(double a, int p, double t, double scale, int m_max) {
  if (a == 0.0 || scale == 0.0) return 0.0;
  const double q = p + 1.0;
  double total = 0.0;
  for (int m = m_max + 1; m < m_max + 2000; ++m) {
    const double log_term = m * std::log(a) + m * q * std::log(t) - std::lgamma(m * q + 1.0);
    const double term = scale * std::exp(log_term);
    total += term;
    // The ratio of consecutive terms is eventually tiny; stop once they no longer matter.
    if (m * q > a * t * 2.0 + 10.0 && term < 1e-18 * total) break;
  }
  return total;
}

int required_series_order(double a, int p, double t, double scale, double tolerance) {
  for (int m = 0; m < 10000; ++m)
    if (monomial_tail_bound(a, p, t, scale, m) <= tolerance) return m;
  throw ConvergenceFailure("no series order reaches the requested tail tolerance");
}

SeriesResult picard_series_1d(const Kernel& kernel, const ScalarField& potential, const ScalarField& w, double t,
                              double x, int m_max, const SeriesGrid& grid) {
  if (kernel.dimension() != 1 || (kernel.equation() != Equation::Heat && kernel.equation() != Equation::Wave)) {
    throw Unsupported("picard_series_1d supports Heat and Wave in d = 1");
  }
  const bool heat = kernel.equation() == Equation::Heat;
  RecursionProblem problem{
      Convolver(heat ? Convolver::Shape::Gaussian : Convolver::Shape::Box, 1.0, heat ? grid.nodes : std::min(grid.nodes, 24)),
      [&](double s, double y) { return potential(s, Point{y}); },
      [&](double s, double y) { return w(s, Point{y}); },
  };
  // |H_m(t)| <= sup|w| (sup|V| p!)^m t^{m(p+1)} / (m(p+1))! with mass(s) = s^p.
  const int p = heat ? 0 : 1;
  return run_series(problem, t, x, m_max, grid, potential.bound(t), p, w.bound(t));
}

SeriesResult second_moment_recursion_1d(const Kernel& kernel, const CovarianceSpec& covariance, double w, double t,
                                        double x, double y, int m_max, const SeriesGrid& grid) {
  if (kernel.dimension() != 1 || (kernel.equation() != Equation::Heat && kernel.equation() != Equation::Wave)) {
    throw Unsupported("second_moment_recursion_1d supports Heat and Wave in d = 1");
  }
  if (!std::isfinite(w)) throw std::invalid_argument("w must be finite");
  const bool heat = kernel.equation() == Equation::Heat;
  RecursionProblem problem{
      Convolver(heat ? Convolver::Shape::Gaussian : Convolver::Shape::Triangle, 2.0,
                heat ? grid.nodes : std::min(grid.nodes, 24)),
      [&](double, double delta) { return covariance(Point{delta}); },
      [w](double, double) { return w * w; },
  };
  // mass^2 is 1 (heat) or s^2 (wave): p = 0 or 2.
  const int p = heat ? 0 : 2;
  const double a = covariance.sup() * (heat ? 1.0 : 2.0);
  return run_series(problem, t, x - y, m_max, grid, a, p, w * w);
}

void write_terms_csv(const std::filesystem::path& path, const std::vector<double>& terms) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "order,term,partial_sum\n";
  double partial = 0.0;
  for (std::size_t m = 0; m < terms.size(); ++m) {
    partial += terms[m];
    out << m << ',' << format_number(terms[m]) << ',' << format_number(partial) << '\n';
  }
}

}  // namespace pfk
