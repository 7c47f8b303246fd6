#pragma once

#include <array>
#include <cmath>

namespace slope {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double k) { x *= k; y *= k; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double k) { return {k * a.x, k * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double k) { return {a.x / k, a.y / k}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double norm_sq(Vec2 a) { return dot(a, a); }

inline Vec2 polar(double angle, double radius = 1.0) {
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

// Symmetric 2x2 matrix [[m11, m12], [m12, m22]].
struct Sym2 {
  double m11 = 0.0;
  double m12 = 0.0;
  double m22 = 0.0;

  constexpr double trace() const { return m11 + m22; }
  constexpr double det() const { return m11 * m22 - m12 * m12; }
  constexpr double quad(Vec2 v) const {
    return m11 * v.x * v.x + 2.0 * m12 * v.x * v.y + m22 * v.y * v.y;
  }
  constexpr double bilinear(Vec2 u, Vec2 v) const {
    return m11 * u.x * v.x + m12 * (u.x * v.y + u.y * v.x) + m22 * u.y * v.y;
  }
  constexpr Vec2 apply(Vec2 v) const {
    return {m11 * v.x + m12 * v.y, m12 * v.x + m22 * v.y};
  }

  // Closed-form eigenvalues, ascending.
  std::array<double, 2> eigenvalues() const {
    const double mean = 0.5 * trace();
    const double radius = std::hypot(0.5 * (m11 - m22), m12);
    return {mean - radius, mean + radius};
  }

  // Solves M z = rhs by Cramer's rule. Caller guarantees det != 0.
  constexpr Vec2 solve(Vec2 rhs) const {
    const double d = det();
    return {(m22 * rhs.x - m12 * rhs.y) / d, (m11 * rhs.y - m12 * rhs.x) / d};
  }
};

// General 2x2 matrix, row-major.
struct Mat2 {
  double m11 = 0.0;
  double m12 = 0.0;
  double m21 = 0.0;
  double m22 = 0.0;

  constexpr Vec2 apply(Vec2 v) const {
    return {m11 * v.x + m12 * v.y, m21 * v.x + m22 * v.y};
  }
};

}  // namespace slope
