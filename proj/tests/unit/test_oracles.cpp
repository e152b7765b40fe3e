#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "pfk/errors.hpp"
#include "pfk/oracles.hpp"

using namespace pfk;

TEST_CASE("monomial tail bounds") {
  CHECK(monomial_tail_bound(1.0, 0, 1.0, 1.0, 5) > 0.0);
  // Sum of e^{a t} beyond order m for p = 0 is the exponential remainder.
  double remainder = 0.0;
  for (int m = 6; m < 60; ++m) remainder += std::pow(0.7 * 1.5, m) / std::tgamma(m + 1.0);
  CHECK(monomial_tail_bound(0.7, 0, 1.5, 1.0, 5) >= remainder * (1.0 - 1e-12));
  CHECK(monomial_tail_bound(0.7, 0, 1.5, 1.0, 5) <= 2.0 * remainder);
  const int m = required_series_order(1.0, 1, 1.0, 2.0, 1e-8);
  CHECK(monomial_tail_bound(1.0, 1, 1.0, 2.0, m) <= 1e-8);
  CHECK(monomial_tail_bound(1.0, 1, 1.0, 2.0, m - 1) > 1e-8);
}

TEST_CASE("volterra reduction and the monomial ODE are two routes to the same numbers") {
  const double t = 1.2;
  // mass 1: e^{ct}
  CHECK(volterra_constant_reduction([](double) { return 1.0; }, 0.6, 1.0, t) ==
        doctest::Approx(std::exp(0.6 * t)).epsilon(1e-9));
  CHECK(monomial_renewal_ode(0.6, 0, 1.0, t) == doctest::Approx(std::exp(0.6 * t)).epsilon(1e-10));
  // mass s: cosh(sqrt(c) t)
  CHECK(volterra_constant_reduction([](double s) { return s; }, 0.6, 2.0, t) ==
        doctest::Approx(2.0 * std::cosh(std::sqrt(0.6) * t)).epsilon(1e-9));
  CHECK(monomial_renewal_ode(0.6, 1, 2.0, t) == doctest::Approx(2.0 * std::cosh(std::sqrt(0.6) * t)).epsilon(1e-10));
  // mass s^2 with c: M''' = 2c M
  CHECK(volterra_constant_reduction([](double s) { return s * s; }, 0.9, 1.0, t) ==
        doctest::Approx(monomial_renewal_ode(1.8, 2, 1.0, t)).epsilon(1e-8));
  // Damped-wave mass (1 - e^{-2as}) / 2a: u'' + 2a u' = c u, u(0) = 1, u'(0) = 0.
  const double a = 0.5, c = 1.0;
  const double r1 = -a + std::sqrt(a * a + c), r2 = -a - std::sqrt(a * a + c);
  const double exact = (r1 * std::exp(r2 * t) - r2 * std::exp(r1 * t)) / (r1 - r2);
  CHECK(volterra_constant_reduction([&](double s) { return -std::expm1(-2.0 * a * s) / (2.0 * a); }, c, 1.0, t) ==
        doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("picard series with constant potential") {
  const ScalarField w = ScalarField::constant(1.0);
  const SeriesResult heat = picard_series_1d(Kernel({Equation::Heat, 1}), ScalarField::constant(0.5), w, 1.0, 0.0, 12);
  CHECK(heat.value == doctest::Approx(std::exp(0.5)).epsilon(1e-6));
  for (int m = 0; m <= 4; ++m) CHECK(heat.terms[m] == doctest::Approx(std::pow(0.5, m) / std::tgamma(m + 1.0)).epsilon(1e-5));
  const SeriesResult wave = picard_series_1d(Kernel({Equation::Wave, 1}), ScalarField::constant(1.0), w, 1.0, 0.0, 8);
  CHECK(wave.value == doctest::Approx(std::cosh(1.0)).epsilon(1e-6));
}

TEST_CASE("picard series refuses a truncation whose tail is too large") {
  const Kernel heat({Equation::Heat, 1});
  try {
    picard_series_1d(heat, ScalarField::constant(2.0), ScalarField::constant(1.0), 1.0, 0.0, 3);
    FAIL("expected ConvergenceFailure");
  } catch (const ConvergenceFailure& e) {
    CHECK(std::string(e.what()).find("m_max >= ") != std::string::npos);
  }
  CHECK_THROWS_AS(picard_series_1d(Kernel({Equation::Heat, 2}), ScalarField::constant(1.0), ScalarField::constant(1.0),
                                   1.0, 0.0, 3),
                  Unsupported);
}

TEST_CASE("picard and finite differences agree for a nonconstant potential") {
  const ScalarField v = parse_field("cos:1,1", 1);
  const ScalarField w = ScalarField::constant(1.0);
  for (Equation eq : {Equation::Heat, Equation::Wave}) {
    const double t = 1.0;
    const SeriesResult s = picard_series_1d(Kernel({eq, 1}), v, w, t, 0.5, 8);
    const FdSolution fd = fd_reference_1d(eq, v, w, ScalarField::constant(0.0), default_fd_grid(eq, t, 0.5, 0.5));
    CHECK(std::abs(s.value - fd.value_at(t, 0.5)) < 1e-4);
    CHECK(s.quadrature_error < 1e-4);
  }
}

TEST_CASE("finite differences against closed forms") {
  const ScalarField zero = ScalarField::constant(0.0);
  const ScalarField cosx = parse_field("cos:1,1", 1);
  const double t = 0.8;
  {
    const FdSolution fd = fd_reference_1d(Equation::Heat, zero, cosx, zero, default_fd_grid(Equation::Heat, t, 0.0, 1.0));
    for (double x : {0.0, 0.3, 1.0}) CHECK(fd.value_at(t, x) == doctest::Approx(std::exp(-t / 2) * std::cos(x)).epsilon(1e-5));
  }
  {
    const FdSolution fd = fd_reference_1d(Equation::Heat, ScalarField::constant(0.7), ScalarField::constant(1.0), zero,
                                          default_fd_grid(Equation::Heat, t, 0.0, 0.0));
    CHECK(fd.value_at(t, 0.0) == doctest::Approx(std::exp(0.7 * t)).epsilon(1e-5));
  }
  {
    const FdSolution fd = fd_reference_1d(Equation::Wave, zero, cosx, cosx, default_fd_grid(Equation::Wave, t, 0.0, 1.0));
    for (double x : {0.0, 0.3, 1.0})
      CHECK(fd.value_at(t, x) == doctest::Approx((std::cos(t) + std::sin(t)) * std::cos(x)).epsilon(1e-5));
  }
  {
    const FdSolution fd = fd_reference_1d(Equation::Wave, ScalarField::constant(1.0), ScalarField::constant(1.0), zero,
                                          default_fd_grid(Equation::Wave, t, 0.0, 0.0));
    CHECK(fd.value_at(t, 0.0) == doctest::Approx(std::cosh(t)).epsilon(1e-5));
  }
  Grid1D bad{-1.0, 1.0, 11, 2, 1.0};
  CHECK_THROWS(fd_reference_1d(Equation::Wave, zero, cosx, zero, bad));
  CHECK_THROWS_AS(fd_reference_1d(Equation::Beam, zero, cosx, zero, default_fd_grid(Equation::Heat, t, 0, 0)), Unsupported);
}

TEST_CASE("second-moment recursion with constant covariance") {
  const SeriesResult heat = second_moment_recursion_1d(Kernel({Equation::Heat, 1}), CovarianceSpec::constant(0.5), 1.0,
                                                       1.0, 0.0, 0.7, 10);
  CHECK(heat.value == doctest::Approx(std::exp(0.5)).epsilon(1e-6));
  const SeriesResult wave = second_moment_recursion_1d(Kernel({Equation::Wave, 1}), CovarianceSpec::constant(1.0), 2.0,
                                                       1.0, 0.0, 0.0, 6);
  CHECK(wave.value == doctest::Approx(4.0 * monomial_renewal_ode(2.0, 2, 1.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("classical Feynman-Kac") {
  const Point x{0.0};
  // Constant potential: every path weight is e^{ct}.
  const ClassicalFkResult c = classical_fk_heat(ScalarField::constant(0.4), ScalarField::constant(1.0), 1.0, x, 16,
                                                {1000, 1, 1});
  CHECK(c.estimate.mean == doctest::Approx(std::exp(0.4)).epsilon(1e-12));
  CHECK(std::abs(c.bias_estimate) < 1e-12);
  // Nonconstant potential against the series oracle.
  const ScalarField v = parse_field("cos:1,1", 1);
  const ScalarField one = ScalarField::constant(1.0);
  const ClassicalFkResult r = classical_fk_heat(v, one, 1.0, x, 64, {100000, 2, 0});
  const SeriesResult s = picard_series_1d(Kernel({Equation::Heat, 1}), v, one, 1.0, 0.0, 8);
  CHECK(std::abs(r.estimate.mean - s.value) <= 4.0 * r.estimate.std_error + 2.0 * r.bias_bound);
  CHECK(r.bias_bound >= std::abs(r.bias_estimate));
  CHECK_THROWS(classical_fk_heat(v, one, 1.0, x, 7, {10, 1, 1}));
}

TEST_CASE("terms csv") {
  const auto path = std::filesystem::temp_directory_path() / "pfk_terms_test.csv";
  write_terms_csv(path, {1.0, 0.5, 0.125});
  std::ifstream in(path);
  std::string header, row0, row1, row2;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(header == "order,term,partial_sum");
  CHECK(row2 == "2,0.125,1.625");
  std::filesystem::remove(path);
}
