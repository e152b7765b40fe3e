#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pfk/format.hpp"
#include "pfk/moments.hpp"

namespace pfk {

CovarianceSpec CovarianceSpec::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("constant covariance must be >= 0");
  return {Kind::Constant, c};
}

CovarianceSpec CovarianceSpec::exponential(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("covariance scale must be positive");
  return {Kind::Exponential, scale};
}

CovarianceSpec CovarianceSpec::gaussian(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("covariance scale must be positive");
  return {Kind::Gaussian, scale};
}

double CovarianceSpec::operator()(const Point& x) const {
  switch (kind) {
    case Kind::Constant: return parameter;
    case Kind::Exponential: return std::exp(-x.norm() / parameter);
    case Kind::Gaussian: return std::exp(-0.5 * x.norm_squared() / (parameter * parameter));
  }
  return 0.0;
}

double CovarianceSpec::sup() const { return kind == Kind::Constant ? parameter : 1.0; }

double CovarianceSpec::spectral_density(double radius, int dimension) const {
  const double d = dimension;
  const double l = parameter;
  switch (kind) {
    case Kind::Constant: return 0.0;
    case Kind::Exponential: {
      const double norm = std::tgamma(0.5 * (d + 1.0)) / std::pow(std::numbers::pi, 0.5 * (d + 1.0));
      return norm * std::pow(l, d) / std::pow(1.0 + l * l * radius * radius, 0.5 * (d + 1.0));
    }
    case Kind::Gaussian:
      return std::pow(l * l / (2.0 * std::numbers::pi), 0.5 * d) * std::exp(-0.5 * l * l * radius * radius);
  }
  return 0.0;
}

std::string CovarianceSpec::describe() const {
  switch (kind) {
    case Kind::Constant: return "const:" + format_number(parameter);
    case Kind::Exponential: return "exp:" + format_number(parameter);
    case Kind::Gaussian: return "gauss:" + format_number(parameter);
  }
  return {};
}

CovarianceSpec parse_covariance(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("covariance must look like const:c, exp:l or gauss:l, got '" + std::string(text) + "'");
  }
  const std::string_view name = text.substr(0, colon);
  const std::string_view number = text.substr(colon + 1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc{} || ptr != number.data() + number.size()) {
    throw std::invalid_argument("bad covariance parameter '" + std::string(number) + "'");
  }
  if (name == "const") return CovarianceSpec::constant(value);
  if (name == "exp") return CovarianceSpec::exponential(value);
  if (name == "gauss") return CovarianceSpec::gaussian(value);
  throw std::invalid_argument("unknown covariance kind '" + std::string(name) + "'");
}

double unit_sphere_area(int dimension) {
  const double d = dimension;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace pfk
