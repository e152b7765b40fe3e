#include "pfk/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pfk/format.hpp"

namespace pfk {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double poly_value(const std::array<double, 3>& c, double t) { return c[0] + t * (c[1] + t * c[2]); }

double poly_sup_abs(const std::array<double, 3>& c, double horizon) {
  double best = std::max(std::abs(poly_value(c, 0.0)), std::abs(poly_value(c, horizon)));
  if (c[2] != 0.0) {
    const double vertex = -c[1] / (2.0 * c[2]);
    if (vertex > 0.0 && vertex < horizon) best = std::max(best, std::abs(poly_value(c, vertex)));
  }
  return best;
}

bool is_uniform_grid(const std::vector<double>& v) {
  if (v.size() < 2) return false;
  const double step = v[1] - v[0];
  if (!(step > 0.0)) return false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs((v[i] - v[i - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step))) return false;
  }
  return true;
}

// Position of x on a uniform axis as (cell index, fraction), clamped.
std::pair<std::size_t, double> locate(const std::vector<double>& axis, double x) {
  const double step = axis[1] - axis[0];
  double s = (x - axis.front()) / step;
  s = std::clamp(s, 0.0, static_cast<double>(axis.size() - 1));
  auto k = static_cast<std::size_t>(s);
  if (k >= axis.size() - 1) k = axis.size() - 2;
  return {k, s - static_cast<double>(k)};
}

}  // namespace

ScalarField ScalarField::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("constant field must be finite");
  return ScalarField(Constant{value});
}

ScalarField ScalarField::cosine(double amplitude, Point wavevector) {
  if (!std::isfinite(amplitude)) throw std::invalid_argument("cosine amplitude must be finite");
  return ScalarField(Cosine{amplitude, wavevector});
}

ScalarField ScalarField::gaussian_bump(double amplitude, Point center, double width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("bump width must be positive");
  if (!std::isfinite(amplitude)) throw std::invalid_argument("bump amplitude must be finite");
  return ScalarField(GaussianBump{amplitude, center, width});
}

ScalarField ScalarField::separable(std::array<double, 3> time_poly, ScalarField space) {
  for (double c : time_poly)
    if (!std::isfinite(c)) throw std::invalid_argument("time polynomial coefficients must be finite");
  return ScalarField(Separable{time_poly, std::make_shared<const ScalarField>(std::move(space))});
}

ScalarField ScalarField::tabulated(std::vector<double> times, std::vector<double> xs, std::vector<double> values) {
  if (!is_uniform_grid(times) || !is_uniform_grid(xs)) {
    throw std::invalid_argument("tabulated field needs uniform ascending axes with >= 2 points");
  }
  if (values.size() != times.size() * xs.size()) throw std::invalid_argument("tabulated field: size mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("tabulated field values must be finite");
  return ScalarField(TabulatedGrid{std::move(times), std::move(xs), std::move(values)});
}

ScalarField ScalarField::custom(std::function<double(double, const Point&)> fn, double bound,
                                double gradient_bound, std::string description) {
  if (!fn) throw std::invalid_argument("custom field needs a callable");
  if (!(bound >= 0.0) || !std::isfinite(bound)) throw std::invalid_argument("custom field bound must be finite");
  return custom(
      std::move(fn), [bound](double) { return bound; }, [gradient_bound](double) { return gradient_bound; },
      std::move(description));
}

ScalarField ScalarField::custom(std::function<double(double, const Point&)> fn, std::function<double(double)> bound,
                                std::function<double(double)> gradient_bound, std::string description) {
  if (!fn || !bound || !gradient_bound) throw std::invalid_argument("custom field needs callables");
  return ScalarField(Custom{std::move(fn), std::move(bound), std::move(gradient_bound), std::move(description)});
}

double ScalarField::operator()(double t, const Point& x) const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value; },
          [&](const Cosine& c) { return c.amplitude * std::cos(c.wavevector.dot(x)); },
          [&](const GaussianBump& b) {
            double r2 = 0.0;
            for (int i = 0; i < x.dim(); ++i) {
              const double center = i < b.center.dim() ? b.center[i] : 0.0;
              r2 += (x[i] - center) * (x[i] - center);
            }
            return b.amplitude * std::exp(-0.5 * r2 / (b.width * b.width));
          },
          [&](const Separable& s) { return poly_value(s.time_poly, t) * (*s.space)(t, x); },
          [&](const TabulatedGrid& g) {
            const auto [it, ft] = locate(g.times, t);
            const auto [ix, fx] = locate(g.xs, x[0]);
            const std::size_t nx = g.xs.size();
            const double v00 = g.values[it * nx + ix];
            const double v01 = g.values[it * nx + ix + 1];
            const double v10 = g.values[(it + 1) * nx + ix];
            const double v11 = g.values[(it + 1) * nx + ix + 1];
            return (1.0 - ft) * ((1.0 - fx) * v00 + fx * v01) + ft * ((1.0 - fx) * v10 + fx * v11);
          },
          [&](const Custom& c) { return c.fn(t, x); },
      },
      kind_);
}

double ScalarField::bound(double horizon) const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return std::abs(c.value); },
          [](const Cosine& c) { return std::abs(c.amplitude); },
          [](const GaussianBump& b) { return std::abs(b.amplitude); },
          [&](const Separable& s) { return poly_sup_abs(s.time_poly, horizon) * s.space->bound(horizon); },
          [](const TabulatedGrid& g) {
            double m = 0.0;
            for (double v : g.values) m = std::max(m, std::abs(v));
            return m;
          },
          [&](const Custom& c) { return c.bound(horizon); },
      },
      kind_);
}

double ScalarField::gradient_bound(double horizon) const {
  return std::visit(
      Overloaded{
          [](const Constant&) { return 0.0; },
          [](const Cosine& c) { return std::abs(c.amplitude) * c.wavevector.norm(); },
          [](const GaussianBump& b) { return std::abs(b.amplitude) / (b.width * std::sqrt(std::exp(1.0))); },
          [&](const Separable& s) {
            return poly_sup_abs(s.time_poly, horizon) * s.space->gradient_bound(horizon);
          },
          [](const TabulatedGrid& g) {
            const std::size_t nx = g.xs.size();
            const double dx = g.xs[1] - g.xs[0];
            double m = 0.0;
            for (std::size_t it = 0; it < g.times.size(); ++it)
              for (std::size_t ix = 0; ix + 1 < nx; ++ix)
                m = std::max(m, std::abs(g.values[it * nx + ix + 1] - g.values[it * nx + ix]) / dx);
            return m;
          },
          [&](const Custom& c) { return c.gradient_bound(horizon); },
      },
      kind_);
}

bool ScalarField::is_identically_zero() const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value == 0.0; },
          [](const Cosine& c) { return c.amplitude == 0.0; },
          [](const GaussianBump& b) { return b.amplitude == 0.0; },
          [](const Separable& s) {
            return (s.time_poly[0] == 0.0 && s.time_poly[1] == 0.0 && s.time_poly[2] == 0.0) ||
                   s.space->is_identically_zero();
          },
          [](const TabulatedGrid& g) {
            return std::all_of(g.values.begin(), g.values.end(), [](double v) { return v == 0.0; });
          },
          [](const Custom&) { return false; },
      },
      kind_);
}

std::string ScalarField::describe() const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return "const:" + format_number(c.value); },
          [](const Cosine& c) {
            std::string out = "cos:" + format_number(c.amplitude);
            for (double k : c.wavevector) out += "," + format_number(k);
            return out;
          },
          [](const GaussianBump& b) {
            const double c0 = b.center.dim() > 0 ? b.center[0] : 0.0;
            const bool uniform = std::all_of(b.center.begin(), b.center.end(), [&](double c) { return c == c0; });
            if (!uniform) return std::string("bump(non-uniform center)");
            return "bump:" + format_number(b.amplitude) + "," + format_number(c0) + "," + format_number(b.width);
          },
          [](const Separable& s) {
            return "sep:" + format_number(s.time_poly[0]) + "," + format_number(s.time_poly[1]) + "," +
                   format_number(s.time_poly[2]) + "*" + s.space->describe();
          },
          [](const TabulatedGrid& g) {
            return "table(" + std::to_string(g.times.size()) + "x" + std::to_string(g.xs.size()) + ")";
          },
          [](const Custom& c) { return c.description; },
      },
      kind_);
}

}  // namespace pfk
