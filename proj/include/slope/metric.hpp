#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "slope/error.hpp"
#include "slope/hyperdual.hpp"
#include "slope/surface.hpp"
#include "slope/vec2.hpp"

namespace slope {

// Flat-ground speed v and slope coefficient w = g/2. The incline enters only
// through the one-form beta, so there is no separate angle field.
struct NavigationParams {
  double v = 1.0;
  double w = 1.0;

  static constexpr NavigationParams normalized() { return {1.0, 1.0}; }
  constexpr bool is_normalized() const { return v == 1.0 && w == 1.0; }

  void validate() const {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "nav speed v must be > 0");
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::invalid_argument, "nav slope coefficient w must be >= 0");
  }
};

// Induced metric a_ij of the graph parametrisation at one point.
struct RiemannMetric2 {
  double a11 = 1.0;
  double a12 = 0.0;
  double a22 = 1.0;

  constexpr Sym2 matrix() const { return {a11, a12, a22}; }
  constexpr double det() const { return a11 * a22 - a12 * a12; }
  constexpr bool positive_definite() const { return a11 > 0.0 && det() > 0.0; }
};

enum class Definiteness { positive_definite, not_positive_definite, indeterminate };

struct FundamentalTensor {
  double g11 = 0.0;
  double g12 = 0.0;
  double g22 = 0.0;

  static constexpr double default_band = 1e-7;

  constexpr Sym2 matrix() const { return {g11, g12, g22}; }
  constexpr double trace() const { return g11 + g22; }
  constexpr double det() const { return g11 * g22 - g12 * g12; }
  std::array<double, 2> eigenvalues() const { return matrix().eigenvalues(); }

  // PD iff trace > 0 and det > 0. The determinant is compared after scaling
  // by (trace/2)^2 so the band does not depend on the size of g.
  Definiteness classify(double band = default_band) const {
    const double tr = trace();
    if (!(tr > 0.0)) return Definiteness::not_positive_definite;
    const double ratio = det() / (0.25 * tr * tr);
    if (ratio > band) return Definiteness::positive_definite;
    if (ratio < -band) return Definiteness::not_positive_definite;
    return Definiteness::indeterminate;
  }
};

// Half the squared slope metric, 1/2 F^2, as a function of the surface
// gradient p and the chart velocity y. Templated for hyper-dual evaluation.
template <class T>
T slope_energy(const T& p1, const T& p2, const T& y1, const T& y2, double v, double w) {
  const T b = p1 * y1 + p2 * y2;
  const T a = sqrt(y1 * y1 + y2 * y2 + b * b);
  const T f = a * a / (T(v) * a - T(w) * b);
  return T(0.5) * f * f;
}

// Exact partials of 1/2 F^2 with respect to velocity y and gradient p.
struct EnergyDerivatives {
  double energy = 0.0;
  Vec2 d_dy;       // dE/dy_i
  Vec2 d_dp;       // dE/dp_m
  Sym2 d2_dydy;    // fundamental tensor g_ij
  Mat2 d2_dydp;    // d2E/dy_i dp_m, row i, column m
};

// Everything the slope metric needs at one chart point: the gradient of f.
class TangentPlane {
 public:
  explicit TangentPlane(Vec2 grad) : grad_(grad) {}

  Vec2 gradient() const { return grad_; }
  double gradient_norm_sq() const { return norm_sq(grad_); }

  RiemannMetric2 metric() const {
    return {1.0 + grad_.x * grad_.x, grad_.x * grad_.y, 1.0 + grad_.y * grad_.y};
  }

  double alpha(Vec2 tv) const {
    require_nonzero(tv);
    return std::sqrt(metric().matrix().quad(tv));
  }

  double beta(Vec2 tv) const { return dot(grad_, tv); }

  // Speed of the lifted velocity (x', y', f_x x' + f_y y') in R^3.
  double lifted_speed(Vec2 tv) const {
    const double b = beta(tv);
    return std::sqrt(norm_sq(tv) + b * b);
  }

  // F = alpha^2 / (v alpha - w beta).
  double F(Vec2 tv, NavigationParams nav = NavigationParams::normalized()) const {
    const double a = alpha(tv);
    const double denom = nav.v * a - nav.w * beta(tv);
    if (!(denom > 0.0)) {
      throw Error(ErrorCode::degenerate_denominator, "v*alpha - w*beta <= 0");
    }
    return a * a / denom;
  }

  // Implicit limacon function; zero exactly on the unit curve F = 1.
  double h(Vec2 tv, NavigationParams nav = NavigationParams::normalized()) const {
    const double b = beta(tv);
    const double lifted_sq = norm_sq(tv) + b * b;
    return lifted_sq - nav.v * std::sqrt(lifted_sq) + nav.w * b;
  }

  // Solves h(tv / F) = 0 for F > 0 by safeguarded Newton on lambda = 1/F.
  double okubo(Vec2 tv, NavigationParams nav = NavigationParams::normalized()) const {
    require_nonzero(tv);
    const double speed = lifted_speed(tv);
    if (!(nav.v * speed - nav.w * beta(tv) > 0.0)) {
      throw Error(ErrorCode::no_root, "limacon equation has no positive root in this direction");
    }
    const auto fn = [&](double lambda) { return h(lambda * tv, nav); };
    const auto slope = [&](double lambda) {
      return 2.0 * lambda * speed * speed - nav.v * speed + nav.w * beta(tv);
    };
    const double tol = 1e-12 * (1.0 + norm_sq(tv));
    double lo = 1e-300;
    double hi = 1e6;
    if (!(fn(hi) > 0.0)) throw Error(ErrorCode::no_root, "root beyond Newton bracket");
    double lambda = std::clamp(1.0 / speed, lo, hi);
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
      const double value = fn(lambda);
      if (value < 0.0) lo = lambda; else hi = lambda;
      if (std::abs(value) <= tol) {
        converged = true;
        break;
      }
      const double d = slope(lambda);
      double next = d != 0.0 ? lambda - value / d : lo;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      lambda = next;
    }
    if (!converged) throw Error(ErrorCode::no_root, "Okubo iteration did not converge");
    // Two polishing steps recover full precision for long direction vectors.
    for (int iter = 0; iter < 2; ++iter) {
      const double d = slope(lambda);
      if (d == 0.0) break;
      const double next = lambda - fn(lambda) / d;
      if (!(std::abs(fn(next)) <= std::abs(fn(lambda)))) break;
      lambda = next;
    }
    return 1.0 / lambda;
  }

  // g_ij by second central differences of 1/2 F^2 with step h |tv|.
  FundamentalTensor fundamental_tensor_fd(Vec2 tv, NavigationParams nav, double step = 1e-4) const {
    require_nonzero(tv);
    const double h = step * norm(tv);
    const auto energy = [&](Vec2 y) {
      const double a = std::sqrt(metric().matrix().quad(y));
      const double denom = nav.v * a - nav.w * beta(y);
      if (!(denom > 0.0)) {
        throw Error(ErrorCode::stencil_out_of_cone, "difference stencil crosses v*alpha - w*beta <= 0");
      }
      const double f = a * a / denom;
      return 0.5 * f * f;
    };
    const Vec2 ex{h, 0.0}, ey{0.0, h};
    const double e0 = energy(tv);
    const double g11 = (energy(tv + ex) - 2.0 * e0 + energy(tv - ex)) / (h * h);
    const double g22 = (energy(tv + ey) - 2.0 * e0 + energy(tv - ey)) / (h * h);
    const double g12 = (energy(tv + ex + ey) - energy(tv + ex - ey) - energy(tv - ex + ey) +
                        energy(tv - ex - ey)) /
                       (4.0 * h * h);
    return {g11, g12, g22};
  }

  // Exact partials of 1/2 F^2 via hyper-dual numbers.
  EnergyDerivatives energy_derivatives(Vec2 tv, NavigationParams nav) const {
    require_nonzero(tv);
    if (!(nav.v * alpha(tv) - nav.w * beta(tv) > 0.0)) {
      throw Error(ErrorCode::degenerate_denominator, "v*alpha - w*beta <= 0");
    }
    using HD = HyperDual<double>;
    // Variables in order p1, p2, y1, y2.
    const double base[4] = {grad_.x, grad_.y, tv.x, tv.y};
    const auto eval = [&](int i, int j) {
      HD vars[4];
      for (int k = 0; k < 4; ++k) vars[k] = HD(base[k]);
      vars[i].d1 = 1.0;
      vars[j].d2 = 1.0;
      return slope_energy(vars[0], vars[1], vars[2], vars[3], nav.v, nav.w);
    };
    EnergyDerivatives out;
    const HD yy11 = eval(2, 2);
    const HD yy12 = eval(2, 3);
    const HD yy22 = eval(3, 3);
    const HD p1y1 = eval(0, 2);
    const HD p1y2 = eval(0, 3);
    const HD p2y1 = eval(1, 2);
    const HD p2y2 = eval(1, 3);
    out.energy = yy11.v;
    out.d_dy = {yy11.d1, yy22.d1};
    out.d_dp = {p1y1.d1, p2y1.d1};
    out.d2_dydy = {yy11.d12, yy12.d12, yy22.d12};
    out.d2_dydp = {p1y1.d12, p2y1.d12, p1y2.d12, p2y2.d12};
    return out;
  }

  FundamentalTensor fundamental_tensor_exact(Vec2 tv, NavigationParams nav) const {
    const Sym2 g = energy_derivatives(tv, nav).d2_dydy;
    return {g.m11, g.m12, g.m22};
  }

 private:
  static void require_nonzero(Vec2 tv) {
    if (tv.x == 0.0 && tv.y == 0.0) throw Error(ErrorCode::zero_vector, "tangent vector is zero");
  }

  Vec2 grad_;
};

inline TangentPlane tangent_plane(const SurfaceSpec& surf, double x, double y) {
  return TangentPlane(surf.gradient(x, y));
}

inline RiemannMetric2 induced_metric(const SurfaceSpec& surf, double x, double y) {
  return tangent_plane(surf, x, y).metric();
}

inline double alpha(const RiemannMetric2& a, Vec2 tv) {
  if (tv.x == 0.0 && tv.y == 0.0) throw Error(ErrorCode::zero_vector, "tangent vector is zero");
  return std::sqrt(a.matrix().quad(tv));
}

inline double beta(const SurfaceSpec& surf, double x, double y, Vec2 tv) {
  return tangent_plane(surf, x, y).beta(tv);
}

inline double slope_metric_F(const SurfaceSpec& surf, double x, double y, Vec2 tv,
                             NavigationParams nav = NavigationParams::normalized()) {
  return tangent_plane(surf, x, y).F(tv, nav);
}

inline double limacon_h(const SurfaceSpec& surf, double x, double y, Vec2 tv,
                        NavigationParams nav = NavigationParams::normalized()) {
  return tangent_plane(surf, x, y).h(tv, nav);
}

inline double okubo_solve(const SurfaceSpec& surf, double x, double y, Vec2 direction,
                          NavigationParams nav = NavigationParams::normalized()) {
  return tangent_plane(surf, x, y).okubo(direction, nav);
}

inline FundamentalTensor fundamental_tensor(const SurfaceSpec& surf, double x, double y, Vec2 tv,
                                            NavigationParams nav = NavigationParams::normalized(),
                                            double step = 1e-4) {
  return tangent_plane(surf, x, y).fundamental_tensor_fd(tv, nav, step);
}

}  // namespace slope
