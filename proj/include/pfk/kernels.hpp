#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pfk/point.hpp"
#include "pfk/random.hpp"

namespace pfk {

enum class Equation { Heat, Wave, DampedWave, Beam };

std::string_view to_string(Equation equation);
Equation parse_equation(std::string_view name);

struct KernelSpec {
  Equation equation = Equation::Heat;
  int dimension = 1;
  double damping = 0.0;                  // DampedWave only
  int beam_table_resolution = 1 << 14;   // Beam only
  double beam_table_halfwidth = 32.0;    // Beam only

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Tabulated reference beam density q_1 (Fourier transform exp(-xi^4)) and the
/// derived inverse-CDF sampler for |q_1| / tv_mass.
struct BeamTable {
  int resolution = 0;
  double halfwidth = 0.0;
  double spacing = 0.0;
  std::vector<double> values;        // q_1 at abscissa(k)
  double tv_mass = 0.0;              // trapezoidal integral of |q_1|
  double signed_mass = 0.0;          // trapezoidal integral of q_1 (= 1 up to truncation)
  std::vector<std::pair<double, double>> sign_intervals;  // where q_1 < 0
  std::vector<double> sampler_cdf;   // cumulative cell masses of |q_1| / tv_mass

  double abscissa(int k) const { return -halfwidth + k * spacing; }

  /// Linear interpolation of q_1; zero outside the table.
  double density(double y) const;

  /// +1 where the interpolated density is >= 0, -1 otherwise.
  int sign(double y) const;

  /// Inverse of the piecewise-linear CDF at u in [0, 1).
  double sample(double u) const;

  /// tv_mass * E[sign(Y)] for Y drawn by `sample`: the total signed mass seen
  /// by the sampler-plus-sign-counter pair.
  double sampler_signed_mass() const;
};

/// q_1(y) = (1/pi) int_0^inf cos(xi y) exp(-xi^4) dxi by composite quadrature.
double beam_reference_density(double y);

BeamTable build_beam_table(int resolution, double halfwidth);

/// Binary cache: magic + (resolution, halfwidth) key + raw values. Derived
/// fields are rebuilt on load, so a loaded table equals a regenerated one.
void save_beam_table(const BeamTable& table, const std::filesystem::path& path);
BeamTable load_beam_table(const std::filesystem::path& path);
BeamTable load_or_build_beam_table(const std::filesystem::path& cache_dir, int resolution,
                                   double halfwidth);

/// Process-wide memoized table.
std::shared_ptr<const BeamTable> shared_beam_table(int resolution, double halfwidth);

/// Kac telegraph time tau_t = int_0^t (-1)^{N_a(s)} ds with N_a a rate-a
/// Poisson process.
double telegraph_time(double damping, double t, SampleStream& stream);

/// Damped-wave (d=1) kernel density e^{-at} I_0(a sqrt(t^2-y^2)) / 2 on |y| < t.
double damped_wave_density(double damping, double t, double y);

/// Gauss-Legendre quadrature of damped_wave_density over (-t, t).
double damped_wave_mass_quadrature(double damping, double t);

/// Green's-function family S(t, dy) for one of the supported equations.
/// Immutable after construction and safe to share between threads.
class Kernel {
 public:
  explicit Kernel(const KernelSpec& spec);

  const KernelSpec& spec() const { return spec_; }
  Equation equation() const { return spec_.equation; }
  int dimension() const { return spec_.dimension; }
  bool is_signed() const { return spec_.equation == Equation::Beam; }
  std::string describe() const;

  /// |S(t, .)|(R^d).
  double total_variation_mass(double t) const;

  /// S(t, R^d) (differs from the total variation only for signed kernels).
  double signed_mass(double t) const;

  /// sup_{0 < s <= horizon} |S(s, .)|(R^d).
  double max_mass(double horizon) const;

  /// Draw from |S(dt, dx)| / |S(dt, R^d)|.
  Point sample_increment(double dt, SampleStream& stream) const;

  /// Sign of the density of S(dt, .) at y (always +1 for non-negative kernels).
  int increment_sign(double dt, const Point& y) const;

  bool has_fourier_transform() const { return spec_.equation != Equation::DampedWave; }

  /// Fourier transform of S(t, .) at xi.
  double fourier_mass(double t, const Point& xi) const;
  double fourier_mass_radial(double t, double radius) const;

  /// int_0^T |F S(s, .)(xi)|^2 ds at |xi| = radius, in closed form.
  double time_integrated_fourier_power(double horizon, double radius) const;

  const BeamTable* beam_table() const { return beam_.get(); }

 private:
  KernelSpec spec_;
  std::shared_ptr<const BeamTable> beam_;
};

}  // namespace pfk
