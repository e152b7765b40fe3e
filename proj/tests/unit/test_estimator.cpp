#include <doctest.h>

#include <cmath>
#include <vector>

#include "pfk/estimator.hpp"
#include "pfk/oracles.hpp"

using namespace pfk;

namespace {


ScalarField radius_squared() {
  return ScalarField::custom([](double, const Point& x) { return x.norm_squared(); }, 100.0, 100.0, "|x|^2 near 0");
}

bool within(double estimate, double se, double exact) { return std::abs(estimate - exact) <= 4.0 * se + 1e-12; }

}  // namespace

TEST_CASE("t = 0 returns w without sampling") {
  const Kernel heat({Equation::Heat, 1});
  const EstimatorResult r = estimate_solution(heat, ScalarField::constant(5.0), parse_field("cos:2,1", 1), 0.0,
                                              Point{0.0}, {}, {1000, 1, 1});
  CHECK(r.mean == 2.0);
  CHECK(r.std_error == 0.0);
}

TEST_CASE("bad arguments are rejected") {
  const Kernel heat({Equation::Heat, 1});
  const ScalarField one = ScalarField::constant(1.0);
  CHECK_THROWS(estimate_solution(heat, one, one, -1.0, Point{0.0}, {}, {10, 1, 1}));
  CHECK_THROWS(estimate_solution(heat, one, one, 1.0, Point{0.0, 0.0}, {}, {10, 1, 1}));
  SolutionOptions bad;
  bad.lambda = 0.0;
  CHECK_THROWS(estimate_solution(heat, one, one, 1.0, Point{0.0}, bad, {10, 1, 1}));
}

TEST_CASE("constant potential with heat kernel reproduces e^{ct} in several dimensions") {
  for (int d : {1, 2, 4}) {
    const Kernel heat({Equation::Heat, d});
    const EstimatorResult r = estimate_solution(heat, ScalarField::constant(0.7), ScalarField::constant(1.0), 1.0,
                                                Point::filled(d, 0.3), {}, {100000, 5, 0});
    CHECK(within(r.mean, r.std_error, std::exp(0.7)));
  }
}

TEST_CASE("the estimator is linear in w") {
  const Kernel wave({Equation::Wave, 1});
  const ScalarField v = parse_field("cos:0.8,2", 1);
  const EstimatorResult a = estimate_solution(wave, v, parse_field("const:1", 1), 0.9, Point{0.1}, {}, {20000, 3, 0});
  const EstimatorResult b = estimate_solution(wave, v, parse_field("const:2", 1), 0.9, Point{0.1}, {}, {20000, 3, 0});
  CHECK(b.mean == 2.0 * a.mean);
  CHECK(b.std_error == 2.0 * a.std_error);
}

TEST_CASE("weights sorted by jump count reproduce the iterates of the integral equation") {
  // Sample mean of weight * 1{N = m} is an unbiased estimate of the m-th iterate.
  const Kernel heat({Equation::Heat, 1});
  const ScalarField v = parse_field("cos:1,1", 1);
  const ScalarField w = ScalarField::constant(1.0);
  const double t = 1.0;
  const EstimatorResult r = estimate_solution(heat, v, w, t, Point{0.5}, {}, {400000, 77, 0});
  const SeriesResult series = picard_series_1d(heat, v, w, t, 0.5, 4, SeriesGrid{.tail_tolerance = 1.0});
  for (int m = 0; m <= 4; ++m) {
    // Var(weight 1{N=m}) <= E[weight^2 1{N=m}] <= e^{2t} P(N = m).
    const double p = std::exp(-t) * std::pow(t, m) / std::tgamma(m + 1.0);
    const double se = std::exp(t) * std::sqrt(p / 400000.0);
    CHECK(std::abs(r.mean_by_jump_count[m] - series.terms[m]) < 4.0 * se);
  }
}

TEST_CASE("signed kernel needs the sign counter") {
  const Kernel beam({Equation::Beam, 1});
  const ScalarField c = ScalarField::constant(1.0);
  SolutionOptions no_sign;
  no_sign.apply_sign_counter = false;
  const EstimatorResult with = estimate_solution(beam, c, c, 0.5, Point{0.0}, {}, {100000, 1, 0});
  const EstimatorResult without = estimate_solution(beam, c, c, 0.5, Point{0.0}, no_sign, {100000, 1, 0});
  // Signed mass 1 gives e^{t}; |S| mass kappa gives e^{kappa t}.
  CHECK(within(with.mean, with.std_error, std::exp(0.5)));
  const double kappa = beam.total_variation_mass(1.0);
  CHECK(within(without.mean, without.std_error, std::exp(kappa * 0.5)));
}

TEST_CASE("large potentials raise an overflow warning") {
  const Kernel heat({Equation::Heat, 1});
  const EstimatorResult r = estimate_solution(heat, ScalarField::constant(1e50), ScalarField::constant(1.0), 1.0,
                                              Point{0.0}, {}, {2000, 1, 1});
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("free wave solutions from initial data") {
  const ScalarField zero = ScalarField::constant(0.0);
  const ScalarField one = ScalarField::constant(1.0);
  const double t = 0.6;
  for (int d = 1; d <= 3; ++d) {
    const Point x = Point::filled(d, 0.4);
    // f0 = |x|^2: u = |x|^2 + d t^2.
    const ScalarField u0 = initial_wave_field(radius_squared(), zero, d);
    CHECK(u0(t, x) == doctest::Approx(x.norm_squared() + d * t * t).epsilon(1e-6));
    // f1 = 1: u = t.
    const ScalarField u1 = initial_wave_field(zero, one, d);
    CHECK(u1(t, x) == doctest::Approx(t).epsilon(1e-6));
    // f0 = cos(x_1): plane wave cos(x_1) cos(t).
    const ScalarField u2 = initial_wave_field(parse_field("cos:1,1", d), zero, d);
    CHECK(u2(t, x) == doctest::Approx(std::cos(0.4) * std::cos(t)).epsilon(1e-6));
    CHECK(u2(0.0, x) == doctest::Approx(std::cos(0.4)));
  }
  // f1 = cos(x_1): sin(t) cos(x_1).
  const ScalarField u3 = initial_wave_field(zero, parse_field("cos:1,1", 3), 3);
  CHECK(u3(t, Point{0.2, 0.0, 1.0}) == doctest::Approx(std::sin(t) * std::cos(0.2)).epsilon(1e-6));
  CHECK_THROWS(initial_wave_field(zero, zero, 4));
}

TEST_CASE("zero potential with a free wave field returns that field") {
  const Kernel wave({Equation::Wave, 3});
  const ScalarField w = initial_wave_field(parse_field("cos:1,1", 3), ScalarField::constant(0.0), 3);
  const EstimatorResult r = estimate_solution(wave, ScalarField::constant(0.0), w, 0.5, Point{0.1, 0.0, 0.0}, {},
                                              {20000, 1, 0});
  CHECK(within(r.mean, r.std_error, std::cos(0.1) * std::cos(0.5)));
}
