#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pfk/point.hpp"

namespace pfk {

/// Deterministic bounded field (t, x) -> R, used for potentials V and for the
/// homogeneous solution w. Evaluation is pure and thread-safe.
class ScalarField {
 public:
  struct Constant {
    double value;
  };
  struct Cosine {
    double amplitude;
    Point wavevector;  // missing coordinates count as zero
  };
  struct GaussianBump {
    double amplitude;
    Point center;
    double width;
  };
  struct Separable {
    std::array<double, 3> time_poly;  // c0 + c1 t + c2 t^2
    std::shared_ptr<const ScalarField> space;
  };
  struct TabulatedGrid {
    std::vector<double> times;   // uniform, ascending
    std::vector<double> xs;      // uniform, ascending
    std::vector<double> values;  // row-major [time][x]
  };
  struct Custom {
    std::function<double(double, const Point&)> fn;
    std::function<double(double)> bound;           // horizon -> sup |field|
    std::function<double(double)> gradient_bound;  // horizon -> sup |grad field|
    std::string description;
  };
  using Kind = std::variant<Constant, Cosine, GaussianBump, Separable, TabulatedGrid, Custom>;

  ScalarField() : kind_(Constant{0.0}) {}

  static ScalarField constant(double value);
  static ScalarField cosine(double amplitude, Point wavevector);
  static ScalarField gaussian_bump(double amplitude, Point center, double width);
  static ScalarField separable(std::array<double, 3> time_poly, ScalarField space);
  /// d = 1 grid with bilinear interpolation in (t, x); clamped outside the grid.
  static ScalarField tabulated(std::vector<double> times, std::vector<double> xs, std::vector<double> values);
  static ScalarField custom(std::function<double(double, const Point&)> fn, double bound,
                            double gradient_bound, std::string description);
  static ScalarField custom(std::function<double(double, const Point&)> fn, std::function<double(double)> bound,
                            std::function<double(double)> gradient_bound, std::string description);

  double operator()(double t, const Point& x) const;

  /// sup |field| on [0, horizon] x R^d.
  double bound(double horizon) const;

  /// Upper bound on sup |grad_x field| on [0, horizon] x R^d (infinite if unknown).
  double gradient_bound(double horizon) const;

  bool is_constant() const { return std::holds_alternative<Constant>(kind_); }
  bool is_identically_zero() const;

  /// Mini-language form ("const:1", "cos:1,2", ...) when one exists.
  std::string describe() const;

  const Kind& kind() const { return kind_; }

 private:
  explicit ScalarField(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Parse failure with the character span of the offending token.
class FieldParseError : public std::invalid_argument {
 public:
  FieldParseError(std::string message, std::size_t offset, std::size_t length)
      : std::invalid_argument(std::move(message)), offset_(offset), length_(length) {}
  std::size_t offset() const { return offset_; }
  std::size_t length() const { return length_; }

 private:
  std::size_t offset_;
  std::size_t length_;
};

/// Grammar (d is the spatial dimension):
///   field := "const:" num
///          | "cos:" num "," num ("," num)*          amplitude, wavevector
///          | "bump:" num "," num "," num            amplitude, center (every coordinate), width
///          | "sep:" num "," num "," num "*" field   (c0 + c1 t + c2 t^2) * field
///          | "zero"
ScalarField parse_field(std::string_view text, int dimension);

/// Two-line rendering of the input with a caret marker under the error span.
std::string format_parse_error(std::string_view text, const FieldParseError& error);

/// Splits "a,b,c" into numbers (used for points on the command line).
std::vector<double> parse_number_list(std::string_view text);

}  // namespace pfk
