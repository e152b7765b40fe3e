#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace pfk {

inline constexpr int kMaxDimension = 8;

/// Point (or vector) in R^d with d <= kMaxDimension, stored inline.
class Point {
 public:
  Point() = default;

  explicit Point(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDimension) {
      throw std::invalid_argument("point dimension must be in [1, " + std::to_string(kMaxDimension) +
                                  "], got " + std::to_string(dim));
    }
  }

  Point(std::initializer_list<double> coords) : Point(static_cast<int>(coords.size())) {
    int i = 0;
    for (double c : coords) coords_[i++] = c;
  }

  static Point filled(int dim, double value) {
    Point p(dim);
    for (int i = 0; i < dim; ++i) p.coords_[i] = value;
    return p;
  }

  int dim() const { return dim_; }
  double& operator[](int i) { return coords_[i]; }
  double operator[](int i) const { return coords_[i]; }
  const double* begin() const { return coords_.data(); }
  const double* end() const { return coords_.data() + dim_; }

  double norm_squared() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += coords_[i] * coords_[i];
    return s;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  double dot(const Point& other) const {
    double s = 0.0;
    const int n = dim_ < other.dim_ ? dim_ : other.dim_;
    for (int i = 0; i < n; ++i) s += coords_[i] * other.coords_[i];
    return s;
  }

  Point& operator+=(const Point& o) {
    for (int i = 0; i < dim_; ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    for (int i = 0; i < dim_; ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  Point& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) coords_[i] *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend Point operator*(Point a, double s) { return a *= s; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.coords_[i] != b.coords_[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDimension> coords_{};
  int dim_ = 0;
};

}  // namespace pfk
