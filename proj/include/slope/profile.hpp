#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slope/error.hpp"
#include "slope/numeric.hpp"

namespace slope {

enum class ProfileKind { paraboloid, cone, ellipsoid, hyperboloid2, hyperboloid1, gaussian, custom };

enum class DerivativeMode { closed_form, central_difference };

constexpr std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::paraboloid: return "paraboloid";
    case ProfileKind::cone: return "cone";
    case ProfileKind::ellipsoid: return "ellipsoid";
    case ProfileKind::hyperboloid2: return "hyperboloid2";
    case ProfileKind::hyperboloid1: return "hyperboloid1";
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::custom: return "custom";
  }
  return "unknown";
}

// Radial interval [lo, hi) or (lo, hi); hi may be +inf.
struct RadialDomain {
  double lo = 0.0;
  double hi = numeric::infinity;
  bool lo_open = false;

  bool contains(double s) const { return (lo_open ? s > lo : s >= lo) && s < hi; }
  bool bounded() const { return std::isfinite(hi); }
};

// Height of the Gaussian bump at the axis, 1/(2 sqrt 6).
inline constexpr double gaussian_peak = 0.5 / (std::numbers::sqrt2 * std::numbers::sqrt3);

// Generator z = phi(s) of a surface of revolution.
class ProfileCurve {
 public:
  static constexpr double default_fd_step = 1e-5;

  static ProfileCurve paraboloid(double h) {
    require_positive(h, "paraboloid h");
    return ProfileCurve(ProfileKind::paraboloid, h, 0.0, {0.0, numeric::infinity, false});
  }
  static ProfileCurve cone(double a) {
    require_positive(a, "cone a");
    return ProfileCurve(ProfileKind::cone, a, 0.0, {0.0, numeric::infinity, false});
  }
  // phi(s) = (c/a) sqrt(a^2 - s^2) on [0, a).
  static ProfileCurve ellipsoid(double a, double c) {
    require_positive(a, "ellipsoid a");
    require_positive(c, "ellipsoid c");
    return ProfileCurve(ProfileKind::ellipsoid, a, c, {0.0, a, false});
  }
  // phi(s) = a sqrt(s^2 + b^2).
  static ProfileCurve hyperboloid2(double a, double b) {
    require_positive(a, "hyperboloid2 a");
    require_positive(b, "hyperboloid2 b");
    return ProfileCurve(ProfileKind::hyperboloid2, a, b, {0.0, numeric::infinity, false});
  }
  // phi(s) = a sqrt(s^2 - b^2) on (b, inf).
  static ProfileCurve hyperboloid1(double a, double b) {
    require_positive(a, "hyperboloid1 a");
    require_positive(b, "hyperboloid1 b");
    return ProfileCurve(ProfileKind::hyperboloid1, a, b, {b, numeric::infinity, true});
  }
  // phi(s) = exp(-s^2) / (2 sqrt 6).
  static ProfileCurve gaussian() {
    return ProfileCurve(ProfileKind::gaussian, 0.0, 0.0, {0.0, numeric::infinity, false});
  }

  // Sampled table (s_i, phi_i) with at least 64 rows and strictly increasing s.
  // A table starting at s = 0 is mirrored before fitting so the interpolant is
  // even about the axis.
  static ProfileCurve custom(std::vector<double> s, std::vector<double> z) {
    if (s.size() < 64 || z.size() != s.size()) {
      throw Error(ErrorCode::invalid_argument, "custom profile needs >= 64 (s, phi) rows");
    }
    if (s.front() < 0.0) {
      throw Error(ErrorCode::invalid_argument, "custom profile radii must be >= 0");
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (!std::isfinite(s[i]) || !std::isfinite(z[i])) {
        throw Error(ErrorCode::invalid_argument, "custom profile rows must be finite");
      }
    }
    const RadialDomain dom{s.front(), s.back(), false};
    std::vector<double> xs, ys;
    if (s.front() == 0.0) {
      for (std::size_t i = s.size(); i-- > 1;) {
        xs.push_back(-s[i]);
        ys.push_back(z[i]);
      }
    }
    xs.insert(xs.end(), s.begin(), s.end());
    ys.insert(ys.end(), z.begin(), z.end());
    ProfileCurve p(ProfileKind::custom, 0.0, 0.0, dom);
    p.table_ = std::make_shared<const numeric::CubicSpline>(std::move(xs), std::move(ys));
    p.samples_ = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(
        std::move(s), std::move(z));
    p.mode_ = DerivativeMode::central_difference;
    return p;
  }

  ProfileCurve with_derivative_mode(DerivativeMode mode, double step = default_fd_step) const {
    if (!(step > 0.0)) throw Error(ErrorCode::invalid_argument, "difference step must be positive");
    if (kind_ == ProfileKind::custom && mode == DerivativeMode::closed_form) {
      throw Error(ErrorCode::invalid_argument, "custom profiles have no closed-form derivative");
    }
    ProfileCurve p = *this;
    p.mode_ = mode;
    p.fd_step_ = step;
    return p;
  }

  // Restricts the domain to [lo, hi) intersected with the natural one.
  ProfileCurve with_domain(double lo, double hi) const {
    if (!(hi > lo) || lo < 0.0) throw Error(ErrorCode::invalid_argument, "domain must satisfy 0 <= lo < hi");
    if (lo < domain_.lo || hi > domain_.hi) {
      throw Error(ErrorCode::out_of_domain, "requested domain exceeds the natural profile domain");
    }
    ProfileCurve p = *this;
    p.domain_.lo = lo;
    p.domain_.hi = hi;
    p.domain_.lo_open = domain_.lo_open && lo == domain_.lo;
    return p;
  }

  ProfileKind kind() const { return kind_; }
  std::string_view name() const { return to_string(kind_); }
  const RadialDomain& domain() const { return domain_; }
  DerivativeMode derivative_mode() const { return mode_; }
  double fd_step() const { return fd_step_; }
  bool has_closed_form() const { return kind_ != ProfileKind::custom; }

  // Named coefficients, in the order they are written in the formulas.
  std::vector<std::pair<std::string, double>> params() const {
    switch (kind_) {
      case ProfileKind::paraboloid: return {{"h", p0_}};
      case ProfileKind::cone: return {{"a", p0_}};
      case ProfileKind::ellipsoid: return {{"a", p0_}, {"c", p1_}};
      case ProfileKind::hyperboloid2:
      case ProfileKind::hyperboloid1: return {{"a", p0_}, {"b", p1_}};
      default: return {};
    }
  }
  const std::pair<std::vector<double>, std::vector<double>>* table() const { return samples_.get(); }

  bool contains(double s) const { return domain_.contains(s); }

  // True when phi'(0+) = 0, so the axis point is smooth.
  bool smooth_axis() const {
    if (domain_.lo != 0.0) return false;
    return kind_ != ProfileKind::cone;
  }

  double value(double s) const {
    check_domain(s);
    return raw(s);
  }

  double derivative(double s) const {
    check_domain(s);
    if (s == 0.0 && !smooth_axis()) {
      throw Error(ErrorCode::non_differentiable, std::string(name()) + " profile has a kink at the axis");
    }
    if (mode_ == DerivativeMode::closed_form) return raw_prime(s);
    const double h = stencil_step(s);
    return numeric::central_difference([this](double t) { return raw(t); }, s, h);
  }

  double second_derivative(double s) const {
    check_domain(s);
    if (s == 0.0 && !smooth_axis()) {
      throw Error(ErrorCode::non_differentiable, std::string(name()) + " profile has a kink at the axis");
    }
    if (mode_ == DerivativeMode::closed_form) return raw_second(s);
    const double h = std::min(10.0 * fd_step_ * std::max(1.0, std::abs(s)), max_step(s));
    if (!(h > 0.0)) {
      throw Error(ErrorCode::out_of_domain, "difference stencil does not fit at s = " + std::to_string(s));
    }
    return numeric::central_second_difference([this](double t) { return raw(t); }, s, h);
  }

  // lim phi'(s)^2 as s -> inf, for builtins on unbounded domains.
  std::optional<double> asymptotic_slope_sq() const {
    if (domain_.bounded()) return std::nullopt;
    switch (kind_) {
      case ProfileKind::paraboloid: return numeric::infinity;
      case ProfileKind::cone:
      case ProfileKind::hyperboloid2:
      case ProfileKind::hyperboloid1: return p0_ * p0_;
      case ProfileKind::gaussian: return 0.0;
      default: return std::nullopt;
    }
  }

  // phi at the lower and upper domain ends (limits where the end is open).
  double value_at_lo() const { return raw(domain_.lo); }
  double value_at_hi() const {
    if (domain_.bounded()) return raw(domain_.hi);
    switch (kind_) {
      case ProfileKind::paraboloid: return -numeric::infinity;
      case ProfileKind::gaussian: return 0.0;
      default: return numeric::infinity;
    }
  }

  // Closed-form (or interpolated) phi, evaluated on the even extension.
  double raw(double s) const {
    s = std::abs(s);
    switch (kind_) {
      case ProfileKind::paraboloid: return p0_ - s * s;
      case ProfileKind::cone: return p0_ * s;
      case ProfileKind::ellipsoid: return (p1_ / p0_) * std::sqrt(std::max(0.0, p0_ * p0_ - s * s));
      case ProfileKind::hyperboloid2: return p0_ * std::sqrt(s * s + p1_ * p1_);
      case ProfileKind::hyperboloid1: return p0_ * std::sqrt(std::max(0.0, s * s - p1_ * p1_));
      case ProfileKind::gaussian: return gaussian_peak * std::exp(-s * s);
      case ProfileKind::custom: return (*table_)(s);
    }
    return 0.0;
  }

 private:
  ProfileCurve(ProfileKind kind, double p0, double p1, RadialDomain dom)
      : kind_(kind), p0_(p0), p1_(p1), domain_(dom) {}

  static void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::invalid_argument, std::string(what) + " must be positive and finite");
    }
  }

  void check_domain(double s) const {
    if (!domain_.contains(s)) {
      throw Error(ErrorCode::out_of_domain,
                  "s = " + std::to_string(s) + " outside " + std::string(name()) + " profile domain");
    }
  }

  // Largest step keeping a two-step stencil inside the domain. A smooth axis
  // is no limit because the even extension is used there.
  double max_step(double s) const {
    double room = numeric::infinity;
    if (domain_.bounded()) room = (domain_.hi - s) / 2.5;
    if (domain_.lo > 0.0 || domain_.lo_open || !smooth_axis()) {
      room = std::min(room, (s - domain_.lo) / 2.5);
    }
    return room;
  }

  double stencil_step(double s) const {
    const double h = std::min(fd_step_ * std::max(1.0, std::abs(s)), max_step(s));
    if (!(h > 0.0)) {
      throw Error(ErrorCode::out_of_domain, "difference stencil does not fit at s = " + std::to_string(s));
    }
    return h;
  }

  double raw_prime(double s) const {
    switch (kind_) {
      case ProfileKind::paraboloid: return -2.0 * s;
      case ProfileKind::cone: return p0_;
      case ProfileKind::ellipsoid: return -(p1_ / p0_) * s / std::sqrt(p0_ * p0_ - s * s);
      case ProfileKind::hyperboloid2: return p0_ * s / std::sqrt(s * s + p1_ * p1_);
      case ProfileKind::hyperboloid1: return p0_ * s / std::sqrt(s * s - p1_ * p1_);
      case ProfileKind::gaussian: return -2.0 * s * gaussian_peak * std::exp(-s * s);
      case ProfileKind::custom: return table_->prime(s);
    }
    return 0.0;
  }

  double raw_second(double s) const {
    switch (kind_) {
      case ProfileKind::paraboloid: return -2.0;
      case ProfileKind::cone: return 0.0;
      case ProfileKind::ellipsoid: {
        const double q = p0_ * p0_ - s * s;
        return -(p1_ / p0_) * p0_ * p0_ / (q * std::sqrt(q));
      }
      case ProfileKind::hyperboloid2: {
        const double q = s * s + p1_ * p1_;
        return p0_ * p1_ * p1_ / (q * std::sqrt(q));
      }
      case ProfileKind::hyperboloid1: {
        const double q = s * s - p1_ * p1_;
        return -p0_ * p1_ * p1_ / (q * std::sqrt(q));
      }
      case ProfileKind::gaussian: return gaussian_peak * (4.0 * s * s - 2.0) * std::exp(-s * s);
      case ProfileKind::custom: return table_->double_prime(s);
    }
    return 0.0;
  }

  ProfileKind kind_;
  double p0_ = 0.0;
  double p1_ = 0.0;
  RadialDomain domain_;
  DerivativeMode mode_ = DerivativeMode::closed_form;
  double fd_step_ = default_fd_step;
  std::shared_ptr<const numeric::CubicSpline> table_;
  std::shared_ptr<const std::pair<std::vector<double>, std::vector<double>>> samples_;
};

inline double eval_profile(const ProfileCurve& p, double s) { return p.value(s); }
inline double profile_derivative(const ProfileCurve& p, double s) { return p.derivative(s); }

enum class Branch { positive, negative };

// Interval of heights u, with per-end closedness.
struct HeightDomain {
  double lo = -numeric::infinity;
  double hi = numeric::infinity;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double u) const {
    return (lo_closed ? u >= lo : u > lo) && (hi_closed ? u <= hi : u < hi);
  }
};

// The height parametrisation s = m(u), inverse of phi on its monotone branch.
class TrigProfile {
 public:
  static constexpr std::size_t scan_steps = 256;
  static constexpr double inversion_tol = 1e-12;

  // Closed-form m for builtins in closed-form mode, numeric inversion otherwise.
  static TrigProfile from(const ProfileCurve& p, Branch branch = Branch::positive) {
    return p.has_closed_form() && p.derivative_mode() == DerivativeMode::closed_form
               ? TrigProfile(p, branch, true)
               : TrigProfile(p, branch, false);
  }
  static TrigProfile numeric(const ProfileCurve& p, Branch branch = Branch::positive) {
    return TrigProfile(p, branch, false);
  }

  const ProfileCurve& profile() const { return profile_; }
  const HeightDomain& domain() const { return domain_; }
  bool closed_form() const { return closed_form_; }
  // +1 when phi increases with s, -1 when it decreases.
  int monotone_sign() const { return sign_; }

  double m(double u) const {
    check_range(u);
    if (closed_form_) return closed_m(u);
    return invert(u);
  }

  // m'(u) = 1 / phi'(m(u)); throws DerivativeBlowup where phi' vanishes.
  double m_prime(double u) const {
    check_range(u);
    if (closed_form_) return closed_m_prime(u);
    const double s = invert(u);
    const double d = profile_.derivative(s);
    if (d == 0.0) throw Error(ErrorCode::derivative_blowup, "phi'(m(u)) = 0");
    return 1.0 / d;
  }

 private:
  TrigProfile(const ProfileCurve& p, Branch branch, bool closed)
      : profile_(p), closed_form_(closed) {
    if (branch == Branch::negative) {
      throw Error(ErrorCode::not_invertible, "only the nonnegative branch +m(u) is supported");
    }
    sign_ = detect_monotone_sign();
    const RadialDomain& d = p.domain();
    const double at_lo = p.value_at_lo();
    const double at_hi = p.value_at_hi();
    const bool lo_closed = !d.lo_open;
    if (sign_ > 0) {
      domain_ = {at_lo, at_hi, lo_closed, false};
    } else {
      domain_ = {at_hi, at_lo, false, lo_closed};
    }
  }

  int detect_monotone_sign() const {
    const RadialDomain& d = profile_.domain();
    const double hi = d.bounded() ? d.hi : std::max(10.0, 2.0 * d.lo);
    int sign = 0;
    for (std::size_t i = 1; i < scan_steps; ++i) {
      const double s = d.lo + (hi - d.lo) * static_cast<double>(i) / scan_steps;
      const double slope = profile_.derivative(s);
      const int here = slope > 0.0 ? 1 : (slope < 0.0 ? -1 : 0);
      if (here == 0 || (sign != 0 && here != sign)) {
        throw Error(ErrorCode::not_invertible,
                    std::string(profile_.name()) + " profile is not strictly monotone on its domain");
      }
      sign = here;
    }
    return sign;
  }

  void check_range(double u) const {
    if (!domain_.contains(u)) {
      throw Error(ErrorCode::out_of_range, "u = " + std::to_string(u) + " outside the range of phi");
    }
  }

  double invert(double u) const {
    const RadialDomain& d = profile_.domain();
    const auto g = [&](double s) { return profile_.raw(s) - u; };
    double lo = d.lo_open ? d.lo + 1e-15 * std::max(1.0, d.lo) : d.lo;
    if (g(lo) == 0.0) return lo;
    double hi;
    if (d.bounded()) {
      hi = d.hi;
    } else {
      hi = std::max(1.0, 2.0 * lo);
      while (std::signbit(g(hi)) == std::signbit(g(lo))) {
        hi *= 2.0;
        if (hi > 1e15) throw Error(ErrorCode::out_of_range, "no bracket for u = " + std::to_string(u));
      }
    }
    const auto brackets = numeric::sign_scan(g, lo, hi, scan_steps);
    if (brackets.empty()) throw Error(ErrorCode::out_of_range, "no bracket for u = " + std::to_string(u));
    const double s = numeric::bisect(g, brackets.front().lo, brackets.front().hi, inversion_tol);
    return d.bounded() ? std::min(s, std::nextafter(d.hi, d.lo)) : s;
  }

  double closed_m(double u) const {
    const auto prm = profile_.params();
    switch (profile_.kind()) {
      case ProfileKind::paraboloid: return std::sqrt(std::max(0.0, prm[0].second - u));
      case ProfileKind::cone: return u / prm[0].second;
      case ProfileKind::ellipsoid: {
        const double a = prm[0].second, c = prm[1].second;
        return a * std::sqrt(std::max(0.0, 1.0 - (u / c) * (u / c)));
      }
      case ProfileKind::hyperboloid2: {
        const double a = prm[0].second, b = prm[1].second;
        return std::sqrt(std::max(0.0, (u / a) * (u / a) - b * b));
      }
      case ProfileKind::hyperboloid1: {
        const double a = prm[0].second, b = prm[1].second;
        return std::sqrt((u / a) * (u / a) + b * b);
      }
      case ProfileKind::gaussian: return std::sqrt(std::max(0.0, -std::log(u / gaussian_peak)));
      case ProfileKind::custom: break;
    }
    return invert(u);
  }

  double closed_m_prime(double u) const {
    const auto prm = profile_.params();
    const auto blowup = [] { return Error(ErrorCode::derivative_blowup, "phi'(m(u)) = 0"); };
    switch (profile_.kind()) {
      case ProfileKind::paraboloid: {
        const double q = prm[0].second - u;
        if (q <= 0.0) throw blowup();
        return -0.5 / std::sqrt(q);
      }
      case ProfileKind::cone: return 1.0 / prm[0].second;
      case ProfileKind::ellipsoid: {
        const double a = prm[0].second, c = prm[1].second;
        const double q = 1.0 - (u / c) * (u / c);
        if (q <= 0.0) throw blowup();
        return -a * u / (c * c * std::sqrt(q));
      }
      case ProfileKind::hyperboloid2:
      case ProfileKind::hyperboloid1: {
        const double a = prm[0].second;
        const double s = closed_m(u);
        if (s == 0.0) throw blowup();
        return u / (a * a * s);
      }
      case ProfileKind::gaussian: {
        const double s = closed_m(u);
        if (s == 0.0) throw blowup();
        return -1.0 / (2.0 * u * s);
      }
      case ProfileKind::custom: break;
    }
    return 0.0;
  }

  ProfileCurve profile_;
  bool closed_form_;
  int sign_ = 0;
  HeightDomain domain_;
};

// m(u) by numeric inversion of phi on the nonnegative branch.
inline double invert_profile(const ProfileCurve& p, double u, Branch branch = Branch::positive) {
  return TrigProfile::numeric(p, branch).m(u);
}

}  // namespace slope
