#include <doctest.h>

#include <cmath>
#include <limits>

#include "pfk/fields.hpp"

using namespace pfk;

TEST_CASE("constant and zero") {
  const ScalarField c = parse_field("const:2.5", 2);
  CHECK(c.is_constant());
  CHECK(c(0.3, Point{1.0, 2.0}) == 2.5);
  CHECK(c.bound(10.0) == 2.5);
  CHECK(c.gradient_bound(10.0) == 0.0);
  CHECK(parse_field("zero", 1).is_identically_zero());
  CHECK(parse_field("const:0", 1).is_identically_zero());
  CHECK_FALSE(c.is_identically_zero());
}

TEST_CASE("cosine field") {
  const ScalarField f = parse_field("cos:2,3,0.5", 2);
  CHECK(f(0.0, Point{0.1, 0.2}) == doctest::Approx(2.0 * std::cos(0.3 + 0.1)));
  CHECK(f.bound(1.0) == 2.0);
  // A one-component wavevector in d = 2 acts on the first coordinate only.
  const ScalarField g = parse_field("cos:1,1", 2);
  CHECK(g(0.0, Point{0.4, 7.0}) == doctest::Approx(std::cos(0.4)));
}

TEST_CASE("bump and separable fields") {
  const ScalarField bump = parse_field("bump:3,1,0.5", 1);
  CHECK(bump(0.0, Point{1.0}) == doctest::Approx(3.0));
  CHECK(bump(0.0, Point{1.5}) < 3.0);
  CHECK(bump.bound(1.0) == doctest::Approx(3.0));

  const ScalarField sep = parse_field("sep:1,2,0*cos:1,1", 1);
  CHECK(sep(0.5, Point{0.0}) == doctest::Approx(2.0));
  CHECK(sep.bound(1.0) >= 3.0);
  CHECK(sep.bound(1.0) <= 3.0 + 1e-12);
}

TEST_CASE("describe round trips through the parser") {
  for (const char* text : {"const:1.5", "cos:1,2", "bump:1,0,0.5", "sep:1,0.5,-0.25*cos:2,1"}) {
    const ScalarField f = parse_field(text, 1);
    const ScalarField g = parse_field(f.describe(), 1);
    for (double x : {-1.0, 0.0, 0.7}) CHECK(f(0.4, Point{x}) == g(0.4, Point{x}));
  }
}

TEST_CASE("tabulated field interpolates and clamps") {
  const ScalarField f = ScalarField::tabulated({0.0, 1.0}, {0.0, 1.0, 2.0}, {0.0, 1.0, 2.0, 10.0, 11.0, 12.0});
  CHECK(f(0.5, Point{0.5}) == doctest::Approx(5.5));
  CHECK(f(2.0, Point{5.0}) == doctest::Approx(12.0));
  CHECK(f.bound(1.0) == doctest::Approx(12.0));
}

TEST_CASE("custom fields carry horizon-dependent bounds") {
  const ScalarField f = ScalarField::custom([](double t, const Point& x) { return t * x[0]; },
                                            [](double h) { return h; }, [](double h) { return h; }, "t x on |x|<=1");
  CHECK(f(2.0, Point{0.5}) == 1.0);
  CHECK(f.bound(3.0) == 3.0);
  CHECK(f.gradient_bound(4.0) == 4.0);
}

TEST_CASE("parse errors point at the offending token") {
  try {
    parse_field("cos:1,abc", 1);
    FAIL("expected a parse error");
  } catch (const FieldParseError& e) {
    CHECK(e.offset() == 6);
    CHECK(e.length() == 3);
    const std::string rendered = format_parse_error("cos:1,abc", e);
    CHECK(rendered.find("cos:1,abc") != std::string::npos);
    CHECK(rendered.find("      ^") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_field("sine:1", 1), FieldParseError);
  CHECK_THROWS_AS(parse_field("cos:1", 1), FieldParseError);
  CHECK_THROWS_AS(parse_field("cos:1,1,1", 1), FieldParseError);
  CHECK_THROWS_AS(parse_field("bump:1,0,-1", 1), FieldParseError);
  CHECK_THROWS_AS(parse_field("const:nan", 1), FieldParseError);
  CHECK_THROWS_AS(parse_field("", 1), FieldParseError);
}

TEST_CASE("number lists") {
  CHECK(parse_number_list("1,-2.5,3e2") == std::vector<double>{1.0, -2.5, 300.0});
  CHECK(parse_number_list("0") == std::vector<double>{0.0});
  CHECK_THROWS(parse_number_list("1,,2"));
  CHECK_THROWS(parse_number_list("x"));
}
