#include "pfk/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pfk/errors.hpp"
#include "pfk/quadrature.hpp"

namespace pfk {

namespace {

void require_positive_time(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(what) + ": time must be positive and finite");
  }
}

// Largest argument for which I_0 stays comfortably inside double range.
constexpr double kBesselArgumentLimit = 700.0;

}  // namespace

std::string_view to_string(Equation equation) {
  switch (equation) {
    case Equation::Heat: return "heat";
    case Equation::Wave: return "wave";
    case Equation::DampedWave: return "damped-wave";
    case Equation::Beam: return "beam";
  }
  return "unknown";
}

Equation parse_equation(std::string_view name) {
  if (name == "heat") return Equation::Heat;
  if (name == "wave") return Equation::Wave;
  if (name == "damped-wave" || name == "damped_wave" || name == "dampedwave") return Equation::DampedWave;
  if (name == "beam") return Equation::Beam;
  throw std::invalid_argument("unknown equation '" + std::string(name) +
                              "' (expected heat, wave, damped-wave or beam)");
}

double telegraph_time(double damping, double t, SampleStream& stream) {
  if (damping < 0.0 || !std::isfinite(damping)) throw std::invalid_argument("telegraph_time: damping must be >= 0");
  if (t < 0.0) throw std::invalid_argument("telegraph_time: negative time");
  if (damping == 0.0) return t;
  double clock = 0.0;
  double direction = 1.0;
  double tau = 0.0;
  while (true) {
    const double next = clock + stream.exponential(damping);
    if (next >= t) {
      tau += direction * (t - clock);
      return tau;
    }
    tau += direction * (next - clock);
    clock = next;
    direction = -direction;
  }
}

double damped_wave_density(double damping, double t, double y) {
  if (std::abs(y) >= t) return 0.0;
  return 0.5 * std::exp(-damping * t) * std::cyl_bessel_i(0.0, damping * std::sqrt(t * t - y * y));
}

double damped_wave_mass_quadrature(double damping, double t) {
  // Substitute y = t sin(phi) to remove the square-root endpoint behaviour.
  const QuadratureRule rule = gauss_legendre(64, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double phi = rule.nodes[i];
    total += rule.weights[i] * 0.5 * std::exp(-damping * t) *
             std::cyl_bessel_i(0.0, damping * t * std::cos(phi)) * t * std::cos(phi);
  }
  return total;
}

Kernel::Kernel(const KernelSpec& spec) : spec_(spec) {
  const int d = spec.dimension;
  if (d < 1 || d > kMaxDimension) {
    throw Unsupported("dimension " + std::to_string(d) + " outside [1, " + std::to_string(kMaxDimension) + "]");
  }
  if (!(spec.damping >= 0.0) || !std::isfinite(spec.damping)) {
    throw std::invalid_argument("damping must be finite and non-negative");
  }
  switch (spec.equation) {
    case Equation::Heat:
      break;
    case Equation::Wave:
      if (d > 3) throw Unsupported("wave kernel is a measure only for d <= 3");
      break;
    case Equation::DampedWave:
      if (d != 1) throw Unsupported("damped-wave sampler is implemented only for d = 1");
      break;
    case Equation::Beam:
      if (d != 1) throw Unsupported("beam kernel is implemented only for d = 1");
      beam_ = shared_beam_table(spec.beam_table_resolution, spec.beam_table_halfwidth);
      break;
  }
}

std::string Kernel::describe() const {
  std::ostringstream out;
  out << to_string(spec_.equation) << " d=" << spec_.dimension;
  if (spec_.equation == Equation::DampedWave) out << " a=" << spec_.damping;
  return out.str();
}

double Kernel::total_variation_mass(double t) const {
  require_positive_time(t, "total_variation_mass");
  switch (spec_.equation) {
    case Equation::Heat: return 1.0;
    case Equation::Wave: return t;
    case Equation::DampedWave: {
      const double a = spec_.damping;
      if (a == 0.0) return t;
      return -std::expm1(-2.0 * a * t) / (2.0 * a);
    }
    case Equation::Beam: return beam_->tv_mass;
  }
  return 0.0;
}

double Kernel::signed_mass(double t) const {
  if (spec_.equation == Equation::Beam) {
    require_positive_time(t, "signed_mass");
    return 1.0;
  }
  return total_variation_mass(t);
}

double Kernel::max_mass(double horizon) const {
  if (horizon <= 0.0) return spec_.equation == Equation::Heat ? 1.0 : 0.0;
  // Every supported mass profile is non-decreasing in t.
  return total_variation_mass(horizon);
}

Point Kernel::sample_increment(double dt, SampleStream& stream) const {
  require_positive_time(dt, "sample_increment");
  const int d = spec_.dimension;
  Point y(d);
  switch (spec_.equation) {
    case Equation::Heat: {
      const double scale = std::sqrt(dt);
      for (int i = 0; i < d; ++i) y[i] = scale * stream.normal();
      return y;
    }
    case Equation::Wave: {
      if (d == 1) {
        y[0] = stream.uniform(-dt, dt);
      } else if (d == 2) {
        const double u = stream.uniform();
        const double radius = dt * std::sqrt(u * (2.0 - u));
        const double angle = 2.0 * std::numbers::pi * stream.uniform();
        y[0] = radius * std::cos(angle);
        y[1] = radius * std::sin(angle);
      } else {
        const double z = 2.0 * stream.uniform() - 1.0;
        const double angle = 2.0 * std::numbers::pi * stream.uniform();
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        y[0] = dt * rho * std::cos(angle);
        y[1] = dt * rho * std::sin(angle);
        y[2] = dt * z;
      }
      return y;
    }
    case Equation::DampedWave: {
      const double a = spec_.damping;
      if (a == 0.0) {
        y[0] = stream.uniform(-dt, dt);
        return y;
      }
      if (a * dt > kBesselArgumentLimit) {
        throw Unsupported("damped-wave sampler: a*dt exceeds the Bessel evaluation range");
      }
      // Rejection from the uniform proposal on (-dt, dt); I_0 peaks at y = 0.
      const double envelope = std::cyl_bessel_i(0.0, a * dt);
      while (true) {
        const double candidate = stream.uniform(-dt, dt);
        const double accept = std::cyl_bessel_i(0.0, a * std::sqrt(dt * dt - candidate * candidate));
        if (stream.uniform() * envelope <= accept) {
          y[0] = candidate;
          return y;
        }
      }
    }
    case Equation::Beam:
      y[0] = std::pow(dt, 0.25) * beam_->sample(stream.uniform());
      return y;
  }
  return y;
}

int Kernel::increment_sign(double dt, const Point& y) const {
  if (spec_.equation != Equation::Beam) return 1;
  return beam_->sign(y[0] / std::pow(dt, 0.25));
}

double Kernel::fourier_mass(double t, const Point& xi) const {
  if (xi.dim() != spec_.dimension) throw std::invalid_argument("fourier_mass: dimension mismatch");
  return fourier_mass_radial(t, xi.norm());
}

double Kernel::fourier_mass_radial(double t, double radius) const {
  require_positive_time(t, "fourier_mass");
  switch (spec_.equation) {
    case Equation::Heat: return std::exp(-0.5 * t * radius * radius);
    case Equation::Wave: {
      const double x = t * radius;
      if (std::abs(x) < 1e-6) return t * (1.0 - x * x / 6.0);
      return std::sin(x) / radius;
    }
    case Equation::Beam: {
      const double r2 = radius * radius;
      return std::exp(-r2 * r2 * t);
    }
    case Equation::DampedWave: break;
  }
  throw Unsupported("fourier_mass is not provided for the damped-wave kernel");
}

double Kernel::time_integrated_fourier_power(double horizon, double radius) const {
  require_positive_time(horizon, "time_integrated_fourier_power");
  const double T = horizon;
  switch (spec_.equation) {
    case Equation::Heat: {
      const double r2 = radius * radius;
      if (T * r2 < 1e-12) return T;
      return -std::expm1(-T * r2) / r2;
    }
    case Equation::Wave: {
      const double x = T * radius;
      if (x < 1e-3) return T * T * T / 3.0 - std::pow(T, 5) * radius * radius / 15.0;
      return (0.5 * T - std::sin(2.0 * x) / (4.0 * radius)) / (radius * radius);
    }
    case Equation::Beam: {
      const double r4 = std::pow(radius, 4);
      if (T * r4 < 1e-12) return T;
      return -std::expm1(-2.0 * T * r4) / (2.0 * r4);
    }
    case Equation::DampedWave: break;
  }
  throw Unsupported("fourier_mass is not provided for the damped-wave kernel");
}

}  // namespace pfk
