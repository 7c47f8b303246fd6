#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "slope/error.hpp"
#include "slope/numeric.hpp"
#include "slope/profile.hpp"
#include "slope/vec2.hpp"

namespace slope {

struct BoundingBox {
  double x_min = -numeric::infinity;
  double x_max = numeric::infinity;
  double y_min = -numeric::infinity;
  double y_max = numeric::infinity;

  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
  static BoundingBox square(double half_width) {
    return {-half_width, half_width, -half_width, half_width};
  }
};

// A graph surface z = f(x, y): either a surface of revolution generated by a
// profile curve, or a general height function.
class SurfaceSpec {
 public:
  using HeightFn = std::function<double(double, double)>;
  using GradientFn = std::function<Vec2(double, double)>;
  using HessianFn = std::function<Sym2(double, double)>;

  static SurfaceSpec revolution(ProfileCurve profile, std::optional<BoundingBox> box = std::nullopt) {
    SurfaceSpec out;
    out.box_ = box ? *box
                   : (profile.domain().bounded() ? BoundingBox::square(profile.domain().hi) : BoundingBox{});
    out.name_ = std::string(profile.name());
    out.profile_ = std::move(profile);
    return out;
  }

  // Missing derivative callbacks are replaced by central differences.
  static SurfaceSpec graph(HeightFn f, GradientFn grad = {}, HessianFn hess = {},
                           BoundingBox box = {}, std::string name = "graph") {
    if (!f) throw Error(ErrorCode::invalid_argument, "graph surface needs a height function");
    SurfaceSpec out;
    out.f_ = std::move(f);
    out.grad_ = std::move(grad);
    out.hess_ = std::move(hess);
    out.box_ = box;
    out.name_ = std::move(name);
    return out;
  }

  static SurfaceSpec flat(double height = 0.0) {
    return graph([height](double, double) { return height; },
                 [](double, double) { return Vec2{}; },
                 [](double, double) { return Sym2{}; }, {}, "flat");
  }

  bool is_revolution() const { return profile_.has_value(); }
  const ProfileCurve* profile() const { return profile_ ? &*profile_ : nullptr; }
  const BoundingBox& box() const { return box_; }
  const std::string& name() const { return name_; }

  double height(double x, double y) const {
    check_box(x, y);
    if (profile_) return profile_->value(std::hypot(x, y));
    return f_(x, y);
  }

  Vec2 gradient(double x, double y) const {
    check_box(x, y);
    if (!profile_) {
      if (grad_) return grad_(x, y);
      const double hx = fd_step * std::max(1.0, std::abs(x));
      const double hy = fd_step * std::max(1.0, std::abs(y));
      return {numeric::central_difference([&](double t) { return f_(t, y); }, x, hx),
              numeric::central_difference([&](double t) { return f_(x, t); }, y, hy)};
    }
    const double s = std::hypot(x, y);
    if (s == 0.0) {
      check_axis();
      return {};
    }
    const double slope = profile_->derivative(s);
    return {slope * x / s, slope * y / s};
  }

  Sym2 hessian(double x, double y) const {
    check_box(x, y);
    if (!profile_) {
      if (hess_) return hess_(x, y);
      const double hx = hess_step * std::max(1.0, std::abs(x));
      const double hy = hess_step * std::max(1.0, std::abs(y));
      const double fxx = numeric::central_difference([&](double t) { return gradient(t, y).x; }, x, hx);
      const double fyy = numeric::central_difference([&](double t) { return gradient(x, t).y; }, y, hy);
      const double fxy = 0.5 * (numeric::central_difference([&](double t) { return gradient(x, t).x; }, y, hy) +
                                numeric::central_difference([&](double t) { return gradient(t, y).y; }, x, hx));
      return {fxx, fxy, fyy};
    }
    const double s = std::hypot(x, y);
    if (s == 0.0) check_axis();
    const double radial = profile_->second_derivative(s);
    if (s < 1e-8) return {radial, 0.0, radial};
    // phi'' along the radial direction, phi'/s across it.
    const double tangential = profile_->derivative(s) / s;
    const double cx = x / s, cy = y / s;
    return {radial * cx * cx + tangential * cy * cy, (radial - tangential) * cx * cy,
            radial * cy * cy + tangential * cx * cx};
  }

 private:
  static constexpr double fd_step = 1e-5;
  static constexpr double hess_step = 1e-4;

  SurfaceSpec() = default;

  void check_box(double x, double y) const {
    if (!box_.contains(x, y)) {
      throw Error(ErrorCode::out_of_domain, "point (" + std::to_string(x) + ", " + std::to_string(y) +
                                                ") outside the surface bounding box");
    }
  }

  void check_axis() const {
    if (!profile_->contains(0.0)) {
      throw Error(ErrorCode::out_of_domain, "axis point is outside the profile domain");
    }
    if (!profile_->smooth_axis()) {
      throw Error(ErrorCode::apex_singularity, std::string(profile_->name()) + " surface is not smooth at the axis");
    }
  }

  std::optional<ProfileCurve> profile_;
  HeightFn f_;
  GradientFn grad_;
  HessianFn hess_;
  BoundingBox box_;
  std::string name_;
};

inline Vec2 gradient(const SurfaceSpec& surf, double x, double y) { return surf.gradient(x, y); }

}  // namespace slope
