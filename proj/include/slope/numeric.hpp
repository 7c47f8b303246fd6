#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "slope/error.hpp"

namespace slope::numeric {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct Bracket {
  double lo;
  double hi;
};

// Bisection on [lo, hi] where fn(lo) and fn(hi) differ in sign. Stops once the
// bracket is narrower than tol or has collapsed to adjacent doubles.
template <class Fn>
double bisect(Fn&& fn, double lo, double hi, double tol) {
  double f_lo = fn(lo);
  const double f_hi = fn(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw Error(ErrorCode::no_root, "bisect: bracket does not straddle a sign change");
  }
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = fn(mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

// Uniform sign scan of fn over [lo, hi] with `steps` cells. Returns every cell
// whose endpoint values differ in sign.
template <class Fn>
std::vector<Bracket> sign_scan(Fn&& fn, double lo, double hi, std::size_t steps) {
  std::vector<Bracket> out;
  const double width = (hi - lo) / static_cast<double>(steps);
  double prev_s = lo;
  double prev_f = fn(lo);
  for (std::size_t i = 1; i <= steps; ++i) {
    const double s = (i == steps) ? hi : lo + width * static_cast<double>(i);
    const double f = fn(s);
    if (prev_f == 0.0 || std::signbit(prev_f) != std::signbit(f)) {
      if (!(prev_f == 0.0 && !out.empty() && out.back().hi == prev_s)) {
        out.push_back({prev_s, s});
      }
    }
    prev_s = s;
    prev_f = f;
  }
  return out;
}

// Fourth-order central first derivative.
template <class Fn>
double central_difference(Fn&& fn, double s, double step) {
  return (fn(s - 2.0 * step) - 8.0 * fn(s - step) + 8.0 * fn(s + step) -
          fn(s + 2.0 * step)) /
         (12.0 * step);
}

// Fourth-order central second derivative.
template <class Fn>
double central_second_difference(Fn&& fn, double s, double step) {
  return (-fn(s - 2.0 * step) + 16.0 * fn(s - step) - 30.0 * fn(s) +
          16.0 * fn(s + step) - fn(s + 2.0 * step)) /
         (12.0 * step * step);
}

struct Minimum {
  double location;
  double value;
};

// Brent minimisation of fn on [lo, hi].
template <class Fn>
Minimum minimize(Fn&& fn, double lo, double hi) {
  const auto [x, fx] = boost::math::tools::brent_find_minima(
      fn, lo, hi, std::numeric_limits<double>::digits / 2);
  return {x, fx};
}

// Natural cubic spline through (xs, ys); xs strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;

  CubicSpline(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 3 || ys_.size() != n) {
      throw Error(ErrorCode::invalid_argument, "spline needs >= 3 matching samples");
    }
    for (std::size_t i = 1; i < n; ++i) {
      if (!(xs_[i] > xs_[i - 1])) {
        throw Error(ErrorCode::invalid_argument, "spline abscissae must be strictly increasing");
      }
    }
    // Tridiagonal solve for second derivatives with natural end conditions.
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = xs_[i] - xs_[i - 1];
      const double h1 = xs_[i + 1] - xs_[i];
      const double diag = 2.0 * (h0 + h1);
      const double rhs = 6.0 * ((ys_[i + 1] - ys_[i]) / h1 - (ys_[i] - ys_[i - 1]) / h0);
      const double denom = diag - h0 * c[i - 1];
      c[i] = h1 / denom;
      d[i] = (rhs - h0 * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 1;) m_[i] = d[i] - c[i] * m_[i + 1];
  }

  double front() const { return xs_.front(); }
  double back() const { return xs_.back(); }
  std::size_t size() const { return xs_.size(); }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

  double operator()(double x) const { return eval(x, 0); }
  double prime(double x) const { return eval(x, 1); }
  double double_prime(double x) const { return eval(x, 2); }

 private:
  double eval(double x, int order) const {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::distance(xs_.begin(), it));
    i = std::clamp<std::size_t>(i, 1, xs_.size() - 1) - 1;
    const double h = xs_[i + 1] - xs_[i];
    const double a = (xs_[i + 1] - x) / h;
    const double b = (x - xs_[i]) / h;
    switch (order) {
      case 0:
        return a * ys_[i] + b * ys_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
      case 1:
        return (ys_[i + 1] - ys_[i]) / h -
               (3.0 * a * a - 1.0) * h * m_[i] / 6.0 +
               (3.0 * b * b - 1.0) * h * m_[i + 1] / 6.0;
      default:
        return a * m_[i] + b * m_[i + 1];
    }
  }

  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> m_;
};

}  // namespace slope::numeric
