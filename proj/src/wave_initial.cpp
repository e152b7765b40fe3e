#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pfk/estimator.hpp"
#include "pfk/quadrature.hpp"

namespace pfk {

namespace {

constexpr int kAngularNodes = 32;
constexpr int kRadialNodes = 24;

// (S(t) * g)(x) for the free wave kernel; g is evaluated at time 0.
class WaveConvolution {
 public:
  explicit WaveConvolution(int dimension)
      : dimension_(dimension), radial_(gauss_legendre(kRadialNodes, 0.0, std::numbers::pi / 2)),
        polar_(gauss_legendre(kRadialNodes, -1.0, 1.0)) {}

  double operator()(const ScalarField& g, double t, const Point& x) const {
    if (t == 0.0) return 0.0;
    switch (dimension_) {
      case 1: {
        // 1/2 int_{x-t}^{x+t} g, composite so that long intervals stay resolved.
        const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * t)));
        return 0.5 * integrate_composite([&](double y) { return g(0.0, Point{y}); }, x[0] - t, x[0] + t, panels);
      }
      case 2: {
        // (1/2pi) int_{|y|<t} g(x-y) / sqrt(t^2-|y|^2) dy with |y| = t sin(phi).
        double sum = 0.0;
        for (std::size_t i = 0; i < radial_.nodes.size(); ++i) {
          const double rho = t * std::sin(radial_.nodes[i]);
          double ring = 0.0;
          for (int k = 0; k < kAngularNodes; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / kAngularNodes;
            ring += g(0.0, Point{x[0] - rho * std::cos(theta), x[1] - rho * std::sin(theta)});
          }
          sum += radial_.weights[i] * std::sin(radial_.nodes[i]) * ring / kAngularNodes;
        }
        return t * sum;
      }
      case 3: {
        // t times the mean of g over the sphere of radius t around x.
        double sum = 0.0;
        for (std::size_t i = 0; i < polar_.nodes.size(); ++i) {
          const double z = polar_.nodes[i];
          const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
          double ring = 0.0;
          for (int k = 0; k < kAngularNodes; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / kAngularNodes;
            ring += g(0.0, Point{x[0] + t * s * std::cos(phi), x[1] + t * s * std::sin(phi), x[2] + t * z});
          }
          sum += polar_.weights[i] * ring / kAngularNodes;
        }
        return t * 0.5 * sum;
      }
      default:
        throw std::invalid_argument("unsupported dimension");
    }
  }

 private:
  int dimension_;
  QuadratureRule radial_;
  QuadratureRule polar_;
};

}  // namespace

ScalarField initial_wave_field(const ScalarField& f0, const ScalarField& f1, int dimension) {
  if (dimension < 1 || dimension > 3) throw std::invalid_argument("initial_wave_field supports d = 1, 2, 3");
  const auto conv = std::make_shared<WaveConvolution>(dimension);
  const bool f1_zero = f1.is_identically_zero();

  auto fn = [=](double t, const Point& x) {
    if (x.dim() != dimension) throw std::invalid_argument("initial_wave_field: point dimension mismatch");
    if (t <= 0.0) return f0(0.0, x);
    double value = 0.0;
    if (dimension == 1) {
      value = 0.5 * (f0(0.0, Point{x[0] + t}) + f0(0.0, Point{x[0] - t}));
    } else {
      const double h = 1e-4 * t;
      value = ((*conv)(f0, t + h, x) - (*conv)(f0, t - h, x)) / (2.0 * h);
    }
    if (!f1_zero) value += (*conv)(f1, t, x);
    return value;
  };

  // |w| <= sup|f0| + T (sup|grad f0| + sup|f1|); d = 1 needs no gradient term.
  auto bound = [=](double horizon) {
    const double grad = dimension == 1 ? 0.0 : f0.gradient_bound(0.0);
    return f0.bound(0.0) + horizon * (grad + f1.bound(0.0));
  };
  auto gradient = [=](double) {
    if (dimension == 1) return f0.gradient_bound(0.0) + f1.bound(0.0);
    return std::numeric_limits<double>::infinity();  // would need second derivatives of f0
  };
  std::string description = "wave-initial(" + f0.describe() + ";" + f1.describe() + ")";
  return ScalarField::custom(std::move(fn), std::move(bound), std::move(gradient), std::move(description));
}

}  // namespace pfk
