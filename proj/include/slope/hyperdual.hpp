#pragma once

#include <cmath>

namespace slope {

// Hyper-dual number a + b e1 + c e2 + d e1e2 with e1^2 = e2^2 = 0. Seeding two
// inputs along e1 and e2 yields exact first and mixed second partials.
template <class T = double>
struct HyperDual {
  T v{};    // value
  T d1{};   // d/de1
  T d2{};   // d/de2
  T d12{};  // d2/de1de2

  constexpr HyperDual() = default;
  constexpr HyperDual(T value) : v(value) {}  // NOLINT(google-explicit-constructor)
  constexpr HyperDual(T value, T a, T b, T c) : v(value), d1(a), d2(b), d12(c) {}

  friend constexpr HyperDual operator+(const HyperDual& a, const HyperDual& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d12 + b.d12};
  }
  friend constexpr HyperDual operator-(const HyperDual& a, const HyperDual& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d12 - b.d12};
  }
  friend constexpr HyperDual operator-(const HyperDual& a) {
    return {-a.v, -a.d1, -a.d2, -a.d12};
  }
  friend constexpr HyperDual operator*(const HyperDual& a, const HyperDual& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + a.v * b.d2,
            a.d12 * b.v + a.d1 * b.d2 + a.d2 * b.d1 + a.v * b.d12};
  }
  friend constexpr HyperDual operator/(const HyperDual& a, const HyperDual& b) {
    return a * reciprocal(b);
  }

  friend constexpr HyperDual reciprocal(const HyperDual& a) {
    const T inv = T(1) / a.v;
    const T inv2 = inv * inv;
    return {inv, -a.d1 * inv2, -a.d2 * inv2,
            T(2) * a.d1 * a.d2 * inv2 * inv - a.d12 * inv2};
  }

  friend HyperDual sqrt(const HyperDual& a) {
    using std::sqrt;
    const T root = sqrt(a.v);
    const T first = T(0.5) / root;
    const T second = T(-0.25) / (root * a.v);
    return {root, first * a.d1, first * a.d2, first * a.d12 + second * a.d1 * a.d2};
  }
};

}  // namespace slope
