#pragma once

// Balls in R^n and their Lebesgue measure. Balls are open; boundaries have
// measure zero so nothing below distinguishes open from closed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "weakmorrey/error.hpp"

namespace weakmorrey {

inline constexpr std::size_t kMaxDimension = 16;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Point = std::vector<double>;

inline void check_dimension(std::size_t n) {
  if (n < 1 || n > kMaxDimension)
    throw dimension_error("dimension " + std::to_string(n) + " outside [1, " +
                          std::to_string(kMaxDimension) + "]");
}

inline double unit_ball_volume(std::size_t n) {
  check_dimension(n);
  // v_n = 2 pi / n * v_{n-2}, exact at n = 1, 2 and tighter than the gamma form.
  double v = n % 2 == 1 ? 2.0 : std::numbers::pi;
  for (std::size_t k = n % 2 == 1 ? 3 : 4; k <= n; k += 2) v *= 2.0 * std::numbers::pi / static_cast<double>(k);
  return v;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw dimension_error("points of dimension " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

class Ball {
 public:
  Ball(Point center, double radius) : center_(std::move(center)), radius_(radius) {
    check_dimension(center_.size());
    if (!(radius_ > 0.0) || !std::isfinite(radius_))
      throw input_error("ball radius must be positive and finite, got " + std::to_string(radius_));
    for (double c : center_)
      if (!std::isfinite(c)) throw input_error("ball center must be finite");
  }

  static Ball origin(std::size_t n, double radius) { return Ball(Point(n, 0.0), radius); }

  const Point& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  std::size_t dimension() const noexcept { return center_.size(); }

  friend bool operator==(const Ball&, const Ball&) = default;

 private:
  Point center_;
  double radius_;
};

inline double ball_measure(std::size_t n, double radius) {
  if (radius == kInf) return kInf;
  return unit_ball_volume(n) * std::pow(radius, static_cast<double>(n));
}

inline double ball_measure(const Ball& b) { return ball_measure(b.dimension(), b.radius()); }

namespace detail {

// a + b + c, adding the two largest magnitudes first: when anything cancels
// it is those two, and their difference is then exact.
inline double sum3(double a, double b, double c) {
  if (std::abs(a) < std::abs(b)) std::swap(a, b);
  if (std::abs(b) < std::abs(c)) std::swap(b, c);
  if (std::abs(a) < std::abs(b)) std::swap(a, b);
  return (a + b) + c;
}

// Volume of the cap of height h in [0, 2R] cut from a ball of radius R in R^n.
inline double cap_volume(std::size_t n, double radius, double height) {
  height = std::clamp(height, 0.0, 2.0 * radius);
  if (height == 0.0) return 0.0;
  const double R = radius;
  const double h = height;
  switch (n) {
    case 1:
      return h;
    case 2: {
      // R^2 (x - sin x) / 2 with x the central angle; the half-angle form
      // and a series for small x avoid cancellation on shallow caps.
      const double x = 4.0 * std::asin(std::min(1.0, std::sqrt(h / (2.0 * R))));
      double x_minus_sin;
      if (x < 1e-2) {
        const double x2 = x * x;
        x_minus_sin = x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
      } else {
        x_minus_sin = x - std::sin(x);
      }
      return 0.5 * R * R * x_minus_sin;
    }
    case 3:
      return std::numbers::pi * h * h * (3.0 * R - h) / 3.0;
    default: {
      // Integrate (n-1)-ball slices orthogonal to the cap axis, at depth u
      // below the pole: R^2 - t^2 = u (2R - u).
      const double slice = unit_ball_volume(n - 1);
      const double e = 0.5 * static_cast<double>(n - 1);
      auto f = [&](double u) { return std::pow(std::max(0.0, u * (2.0 * R - u)), e); };
      double err = 0.0;
      const double integral =
          boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, h, 12, 1e-11, &err);
      return slice * integral;
    }
  }
}

}  // namespace detail

// |B(a, r) ∩ B(b, s)| where d = |a - b|; s may be +inf.
inline double intersection_measure(std::size_t n, double d, double r, double s) {
  if (r <= 0.0 || s <= 0.0) return 0.0;
  if (s == kInf || std::max(r, s) - d >= std::min(r, s)) return ball_measure(n, std::min(r, s));
  if (d - std::max(r, s) >= std::min(r, s)) return 0.0;
  // Cap heights on either side of the radical hyperplane, factored so that
  // nearly tangent or nearly concentric configurations keep their relative
  // accuracy.
  const double h_r = detail::sum3(r, s, -d) * detail::sum3(s, -r, d) / (2.0 * d);
  const double h_s = detail::sum3(r, s, -d) * detail::sum3(r, -s, d) / (2.0 * d);
  return std::min(detail::cap_volume(n, r, h_r) + detail::cap_volume(n, s, h_s), ball_measure(n, std::min(r, s)));
}

inline double intersection_measure(const Ball& a, const Ball& b) {
  return intersection_measure(a.dimension(), distance(a.center(), b.center()), a.radius(), b.radius());
}

}  // namespace weakmorrey
