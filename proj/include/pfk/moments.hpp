#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "pfk/fields.hpp"
#include "pfk/kernels.hpp"
#include "pfk/monte_carlo.hpp"
#include "pfk/paths.hpp"

namespace pfk {

/// Bounded isotropic spatial covariance f of the noise, with its spectral
/// density m in the convention f(x) = int e^{-i xi.x} m(xi) dxi.
struct CovarianceSpec {
  enum class Kind { Constant, Exponential, Gaussian };

  Kind kind = Kind::Constant;
  double parameter = 0.0;  // c for Constant, the length scale otherwise

  static CovarianceSpec constant(double c);
  static CovarianceSpec exponential(double scale);
  static CovarianceSpec gaussian(double scale);

  double operator()(const Point& x) const;
  double sup() const;

  /// Constant covariance has spectral measure c * delta_0 (no density).
  bool is_atom() const { return kind == Kind::Constant; }
  double atom_mass() const { return is_atom() ? parameter : 0.0; }

  /// Radial spectral density m(|xi| = radius) in dimension d (zero for the atom).
  double spectral_density(double radius, int dimension) const;

  /// "const:1", "exp:0.5", "gauss:2".
  std::string describe() const;

  friend bool operator==(const CovarianceSpec&, const CovarianceSpec&) = default;
};

CovarianceSpec parse_covariance(std::string_view text);

/// Surface area of the unit sphere in R^d (2 for d = 1).
double unit_sphere_area(int dimension);

struct MomentOptions {
  /// Orders above kMaxMomentOrder are refused unless this is set: the factor
  /// e^{t n(n-1)/2} makes the relative error grow very quickly.
  bool allow_high_order = false;
};

inline constexpr int kMaxMomentOrder = 6;

struct SecondMomentScratch {
  std::vector<double> times;
  std::vector<Point> first;
  std::vector<Point> second;
};

/// e^t w(t - tau_N, X1) w(t - tau_N, X2) prod_i mass(gap_i)^2 f(X1_{tau_i} - X2_{tau_i})
/// with one rate-one clock shared by both paths.
SampleRecord second_moment_sample(const Kernel& kernel, const CovarianceSpec& covariance, const ScalarField& w,
                                  double t, const Point& x, const Point& y, SampleStream& stream,
                                  SecondMomentScratch& scratch);

/// Estimate of E[u(t, x) u(t, y)].
EstimatorResult estimate_second_moment(const Kernel& kernel, const CovarianceSpec& covariance,
                                       const ScalarField& w, double t, const Point& x, const Point& y,
                                       const MonteCarloOptions& mc);

struct NthMomentScratch {
  PairClock clock;
  MultiPaths paths;
};

/// Pairwise-clock weight for E[u(t, x_1) ... u(t, x_n)].
SampleRecord nth_moment_sample(const Kernel& kernel, const CovarianceSpec& covariance, const ScalarField& w,
                               double t, std::span<const Point> points, SampleStream& stream,
                               NthMomentScratch& scratch);

EstimatorResult estimate_nth_moment(const Kernel& kernel, const CovarianceSpec& covariance, const ScalarField& w,
                                    double t, std::span<const Point> points, const MonteCarloOptions& mc,
                                    const MomentOptions& options = {});

struct AdmissibilityResult {
  double value = 0.0;
  bool divergent = false;
  double radius = 0.0;           // last truncation radius used
  double relative_change = 0.0;  // of the last radius doubling
  int doublings = 0;
};

struct AdmissibilityOptions {
  double rel_tol = 1e-9;
  double max_radius = 1099511627776.0;  // 2^40
};

/// int_0^T ds int mu(dxi) |F S(s)(xi)|^2 by radial reduction. The truncation
/// radius is doubled until two consecutive relative changes fall below
/// rel_tol; reaching max_radius first flags divergence.
AdmissibilityResult check_admissibility(const Kernel& kernel, const CovarianceSpec& covariance, double horizon,
                                        const AdmissibilityOptions& options = {});

/// Same for an arbitrary radial spectral density (e.g. white noise, m = const).
AdmissibilityResult check_admissibility(const Kernel& kernel, const std::function<double(double)>& radial_density,
                                        double horizon, const AdmissibilityOptions& options = {});

}  // namespace pfk
