#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "pfk/errors.hpp"
#include "pfk/kernels.hpp"
#include "pfk/monte_carlo.hpp"
#include "pfk/quadrature.hpp"
#include "pfk/validation.hpp"

using namespace pfk;

namespace {

// Mean and standard error of g(increment) over n draws.
template <class G>
std::pair<double, double> increment_moment(const Kernel& k, double dt, G g, std::uint64_t n, std::uint64_t seed) {
  RunningStats stats;
  for (std::uint64_t i = 0; i < n; ++i) {
    SampleStream s(seed, i);
    stats.push(g(k.sample_increment(dt, s)));
  }
  return {stats.mean, stats.std_error()};
}

}  // namespace

TEST_CASE("equation names round trip") {
  for (Equation e : {Equation::Heat, Equation::Wave, Equation::DampedWave, Equation::Beam})
    CHECK(parse_equation(to_string(e)) == e);
  CHECK_THROWS_AS(parse_equation("schrodinger"), std::invalid_argument);
}

TEST_CASE("unsupported combinations are refused") {
  CHECK_THROWS_AS(Kernel({Equation::Wave, 4}), Unsupported);
  CHECK_THROWS_AS(Kernel({Equation::Beam, 2}), Unsupported);
  CHECK_THROWS_AS(Kernel({Equation::DampedWave, 2, 1.0}), Unsupported);
  CHECK_THROWS_AS(Kernel({Equation::Heat, 9}), Unsupported);
  CHECK_THROWS(Kernel({Equation::DampedWave, 1, -1.0}));
  CHECK_THROWS(Kernel({Equation::Heat, 1}).total_variation_mass(0.0));
}

TEST_CASE("masses of the non-negative kernels") {
  for (int d = 1; d <= 3; ++d) {
    const Kernel heat({Equation::Heat, d});
    const Kernel wave({Equation::Wave, d});
    for (double t : {0.1, 1.0, 3.5}) {
      CHECK(heat.total_variation_mass(t) == 1.0);
      CHECK(wave.total_variation_mass(t) == doctest::Approx(t));
      CHECK(wave.signed_mass(t) == wave.total_variation_mass(t));
    }
  }
}

TEST_CASE("damped-wave mass: closed form against quadrature of the density") {
  for (double a : {0.0, 0.3, 1.0, 2.5}) {
    const Kernel k({Equation::DampedWave, 1, a});
    for (double t : {0.2, 1.0, 2.0}) {
      CHECK(k.total_variation_mass(t) == doctest::Approx(damped_wave_mass_quadrature(a, t)).epsilon(1e-9));
    }
  }
  CHECK(damped_wave_density(0.0, 1.0, 0.3) == doctest::Approx(0.5));
  CHECK(damped_wave_density(1.0, 1.0, 1.5) == 0.0);
}

TEST_CASE("fourier transforms at zero frequency equal the signed mass") {
  for (int d = 1; d <= 3; ++d) {
    const Kernel heat({Equation::Heat, d});
    const Kernel wave({Equation::Wave, d});
    const Point zero = Point::filled(d, 0.0);
    CHECK(heat.fourier_mass(0.7, zero) == doctest::Approx(1.0));
    CHECK(wave.fourier_mass(0.7, zero) == doctest::Approx(0.7));
  }
  const Kernel beam({Equation::Beam, 1});
  CHECK(beam.fourier_mass(0.7, Point{0.0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(Kernel({Equation::DampedWave, 1, 1.0}).fourier_mass(1.0, Point{1.0}), Unsupported);
}

TEST_CASE("time-integrated fourier power matches quadrature of the squared transform") {
  const std::vector<Kernel> kernels = {Kernel({Equation::Heat, 2}), Kernel({Equation::Wave, 3}),
                                       Kernel({Equation::Beam, 1})};
  for (const Kernel& k : kernels) {
    for (double r : {0.0, 0.4, 3.0, 25.0}) {
      for (double T : {0.5, 2.0}) {
        auto power = [&](double s) {
          if (s <= 0.0) return k.equation() == Equation::Wave ? 0.0 : 1.0;
          const double f = k.fourier_mass_radial(s, r);
          return f * f;
        };
        // Dyadic pieces toward s = 0 resolve the e^{-2 s r^4} spike of the beam.
        double numeric = 0.0;
        double hi = T;
        for (int piece = 0; piece < 80; ++piece, hi *= 0.5) numeric += integrate_composite(power, hi / 2, hi, 2);
        numeric += hi * power(hi);
        CHECK(k.time_integrated_fourier_power(T, r) == doctest::Approx(numeric).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("reference beam density") {
  // q_1(0) = Gamma(5/4) / pi
  CHECK(beam_reference_density(0.0) == doctest::Approx(std::tgamma(1.25) / std::numbers::pi).epsilon(1e-10));
  CHECK(beam_reference_density(2.7) == doctest::Approx(beam_reference_density(-2.7)));
  // q_1 changes sign: its first negative lobe sits near |y| = 3.
  CHECK(beam_reference_density(3.5) < 0.0);
}

TEST_CASE("beam table properties") {
  const BeamTable table = build_beam_table(1 << 12, 32.0);
  CHECK(table.signed_mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(table.tv_mass > 1.2);
  CHECK(table.tv_mass < 1.3);
  CHECK_FALSE(table.sign_intervals.empty());
  CHECK(table.sampler_signed_mass() == doctest::Approx(table.signed_mass).epsilon(1e-3));
  CHECK(table.density(40.0) == 0.0);
  CHECK(table.sign(0.0) == 1);
  CHECK(table.sign(3.5) == -1);
  // Inverse CDF is monotone and stays inside the table.
  double previous = -1e300;
  for (int i = 0; i < 200; ++i) {
    const double y = table.sample(i / 200.0);
    CHECK(y >= previous);
    CHECK(std::abs(y) <= table.halfwidth);
    previous = y;
  }
}

TEST_CASE("beam table cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "pfk_beam_cache_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const BeamTable built = build_beam_table(1024, 24.0);
  save_beam_table(built, dir / "t.bin");
  const BeamTable loaded = load_beam_table(dir / "t.bin");
  CHECK(loaded.values == built.values);
  CHECK(loaded.tv_mass == built.tv_mass);
  CHECK(loaded.sampler_cdf == built.sampler_cdf);
  const BeamTable cached = load_or_build_beam_table(dir, 1024, 24.0);
  CHECK(cached.values == built.values);
  std::filesystem::remove_all(dir);
}

TEST_CASE("increment second moments") {
  const std::uint64_t n = 200000;
  const double dt = 0.8;
  auto sq = [](const Point& y) { return y.norm_squared(); };
  for (int d = 1; d <= 3; ++d) {
    const auto [m, se] = increment_moment(Kernel({Equation::Heat, d}), dt, sq, n, 11 + d);
    CHECK(std::abs(m - d * dt) < 4.0 * se);
  }
  // Normalized wave kernels: uniform on (-t, t); disk with weight 1/sqrt(t^2 - r^2); sphere |y| = t.
  {
    const auto [m, se] = increment_moment(Kernel({Equation::Wave, 1}), dt, sq, n, 21);
    CHECK(std::abs(m - dt * dt / 3.0) < 4.0 * se);
  }
  {
    const auto [m, se] = increment_moment(Kernel({Equation::Wave, 2}), dt, sq, n, 22);
    CHECK(std::abs(m - 2.0 * dt * dt / 3.0) < 4.0 * se);
  }
  {
    const Kernel wave3({Equation::Wave, 3});
    for (std::uint64_t i = 0; i < 1000; ++i) {
      SampleStream s(23, i);
      CHECK(wave3.sample_increment(dt, s).norm() == doctest::Approx(dt));
    }
  }
}

TEST_CASE("damped-wave increments follow the normalized Bessel density") {
  const double a = 1.5, t = 1.0;
  const Kernel k({Equation::DampedWave, 1, a});
  const double mass = k.total_variation_mass(t);
  std::vector<double> draws;
  for (std::uint64_t i = 0; i < 50000; ++i) {
    SampleStream s(31, i);
    draws.push_back(k.sample_increment(t, s)[0]);
  }
  std::sort(draws.begin(), draws.end());
  auto cdf = [&](double y) {
    if (y <= -t) return 0.0;
    if (y >= t) return 1.0;
    return integrate_composite([&](double z) { return damped_wave_density(a, t, z); }, -t, y, 4) / mass;
  };
  CHECK(ks_statistic(draws, cdf) < ks_critical_1pct(static_cast<double>(draws.size())));
}

TEST_CASE("telegraph time stays in [-t, t]") {
  for (std::uint64_t i = 0; i < 5000; ++i) {
    SampleStream s(41, i);
    const double tau = telegraph_time(2.0, 1.3, s);
    CHECK(std::abs(tau) <= 1.3);
  }
  SampleStream s(42, 0);
  CHECK(telegraph_time(0.0, 0.9, s) == 0.9);
}

TEST_CASE("beam increments scale like t^{1/4}") {
  const Kernel beam({Equation::Beam, 1});
  std::vector<double> a, b;
  for (std::uint64_t i = 0; i < 40000; ++i) {
    SampleStream s1(51, i), s2(52, i);
    a.push_back(beam.sample_increment(1.6, s1)[0]);
    b.push_back(2.0 * beam.sample_increment(0.1, s2)[0]);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(ks_two_sample(a, b) < ks_critical_1pct(a.size() / 2.0));
  SampleStream s(53, 0);
  CHECK(beam.increment_sign(1.0, Point{0.1}) == 1);
  CHECK(beam.increment_sign(16.0, Point{7.0}) == -1);
}

TEST_CASE("telegraph process as a second route to the damped-wave measure") {
  // Kac: K(s) f = E f(Theta tau_s) solves the damped equation with data (f, 0), and
  // (d/dt + 2a) S_a = K, so int g dS_a(t) = int_0^t e^{-2a(t-s)} E g(Theta tau_s) ds.
  const double a = 1.0, t = 1.0;
  const Kernel k({Equation::DampedWave, 1, a});
  const double mass = k.total_variation_mass(t);
  auto g = [](double y) { return std::cos(2.0 * y); };

  const QuadratureRule rule = gauss_legendre(12, 0.0, t);
  double route_kac = 0.0, var_kac = 0.0;
  RunningStats tau_mean;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double s_j = rule.nodes[j];
    RunningStats at_node;
    for (std::uint64_t i = 0; i < 20000; ++i) {
      SampleStream s(61 + j, i);
      const double tau = telegraph_time(a, s_j, s);
      const double theta = s.uniform() < 0.5 ? -1.0 : 1.0;
      at_node.push(g(theta * tau));
    }
    const double weight = rule.weights[j] * std::exp(-2.0 * a * (t - s_j));
    route_kac += weight * at_node.mean;
    var_kac += weight * weight * at_node.std_error() * at_node.std_error();
  }
  // E[tau_t] is the mass itself.
  for (std::uint64_t i = 0; i < 100000; ++i) {
    SampleStream s(90, i);
    tau_mean.push(telegraph_time(a, t, s));
  }
  CHECK(std::abs(tau_mean.mean - mass) < 4.0 * tau_mean.std_error());

  RunningStats sampler;
  for (std::uint64_t i = 0; i < 200000; ++i) {
    SampleStream s(62, i);
    sampler.push(mass * g(k.sample_increment(t, s)[0]));
  }
  const double se = std::sqrt(var_kac + sampler.std_error() * sampler.std_error());
  CHECK(std::abs(route_kac - sampler.mean) < 4.0 * se);
  const double quad = integrate_composite([&](double y) { return g(y) * damped_wave_density(a, t, y); }, -t, t, 8);
  CHECK(std::abs(sampler.mean - quad) < 4.0 * sampler.std_error());
}
