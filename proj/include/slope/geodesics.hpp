#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string_view>
#include <vector>

#include "slope/convexity.hpp"
#include "slope/error.hpp"
#include "slope/metric.hpp"
#include "slope/surface.hpp"
#include "slope/vec2.hpp"

namespace slope {

// ---------------------------------------------------------------------------
// Indicatrix
// ---------------------------------------------------------------------------

struct LimaconFit {
  double c0 = 0.0;        // constant term, v in normalized form
  double c1 = 0.0;        // cosine coefficient
  double residual = 0.0;  // max |r - c0 - c1 cos(theta)|
};

struct Indicatrix {
  Vec2 center;
  std::vector<Vec2> samples;  // chart vectors with F = 1
  Vec2 e1;                    // unit steepest descent, in chart components
  Vec2 e2;                    // a-orthogonal complement of e1
  bool frame_degenerate = false;
  bool non_convex = false;
  LimaconFit fit;
  double max_unit_residual = 0.0;  // max |F(sample) - 1|
};

// Least-squares fit r = c0 + c1 cos(theta).
inline LimaconFit fit_limacon(const std::vector<double>& r, const std::vector<double>& theta) {
  double n = 0, sc = 0, scc = 0, sr = 0, src = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double c = std::cos(theta[i]);
    n += 1.0;
    sc += c;
    scc += c * c;
    sr += r[i];
    src += r[i] * c;
  }
  const double det = n * scc - sc * sc;
  LimaconFit fit;
  fit.c0 = (scc * sr - sc * src) / det;
  fit.c1 = (n * src - sc * sr) / det;
  for (std::size_t i = 0; i < r.size(); ++i) {
    fit.residual = std::max(fit.residual, std::abs(r[i] - fit.c0 - fit.c1 * std::cos(theta[i])));
  }
  return fit;
}

// Unit curve F = 1 sampled at n equally spaced chart angles, expressed in the
// a-orthonormal frame whose first axis points straight downhill.
inline Indicatrix indicatrix(const SurfaceSpec& surf, double x, double y,
                             NavigationParams nav = NavigationParams::normalized(), std::size_t n = 256) {
  nav.validate();
  if (n < 8) throw Error(ErrorCode::insufficient_directions, "indicatrix needs at least 8 samples");
  const TangentPlane plane = tangent_plane(surf, x, y);
  const Sym2 a = plane.metric().matrix();
  const Vec2 grad = plane.gradient();
  const double grad_sq = norm_sq(grad);

  Indicatrix out;
  out.center = {x, y};
  if (grad_sq == 0.0) {
    out.frame_degenerate = true;
    out.e1 = {1.0, 0.0};
    out.e2 = {0.0, 1.0};
  } else {
    // a^{-1} grad f = grad f / (1 + |grad f|^2), of a-length sqrt(G / (1 + G)).
    const Vec2 descent = -grad / (1.0 + grad_sq);
    out.e1 = descent / std::sqrt(a.quad(descent));
    out.e2 = Vec2{-grad.y, grad.x} / std::sqrt(grad_sq);
  }

  std::vector<double> radius, theta;
  out.samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 dir = polar(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    const Vec2 unit = dir / plane.F(dir, nav);
    out.samples.push_back(unit);
    out.max_unit_residual = std::max(out.max_unit_residual, std::abs(plane.F(unit, nav) - 1.0));
    const double X = a.bilinear(unit, out.e1);
    const double Y = a.bilinear(unit, out.e2);
    radius.push_back(std::hypot(X, Y));
    theta.push_back(std::atan2(Y, X));
  }
  out.fit = fit_limacon(radius, theta);

  // Turning direction of consecutive edges; both signs means a dent.
  double scale = 0.0;
  for (const Vec2& p : out.samples) scale = std::max(scale, norm_sq(p));
  bool pos = false, neg = false;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 prev = out.samples[(k + n - 1) % n];
    const Vec2 here = out.samples[k];
    const Vec2 next = out.samples[(k + 1) % n];
    const double turn = cross(here - prev, next - here);
    const double tol = 1e-12 * scale;
    if (turn > tol) pos = true;
    if (turn < -tol) neg = true;
  }
  out.non_convex = pos && neg;
  return out;
}

// ---------------------------------------------------------------------------
// Geodesics
// ---------------------------------------------------------------------------

enum class PathStatus { complete, left_convex_domain, left_surface_domain, step_too_large };

constexpr std::string_view to_string(PathStatus s) {
  switch (s) {
    case PathStatus::complete: return "complete";
    case PathStatus::left_convex_domain: return "left_convex_domain";
    case PathStatus::left_surface_domain: return "left_surface_domain";
    case PathStatus::step_too_large: return "step_too_large";
  }
  return "unknown";
}

struct GeodesicPath {
  std::vector<Vec2> points;
  std::vector<Vec2> velocities;
  std::vector<double> times;  // F-arclength, i.e. travel time
  std::vector<double> F_values;
  double step = 0.0;
  PathStatus status = PathStatus::complete;

  double length() const { return times.empty() ? 0.0 : times.back(); }

  double max_relative_drift() const {
    double worst = 0.0;
    for (double f : F_values) worst = std::max(worst, std::abs(f - F_values.front()) / F_values.front());
    return worst;
  }

  // Cubic Hermite interpolation between integration nodes.
  Vec2 position_at(double t) const {
    if (times.empty() || t < times.front() || t > times.back()) {
      throw Error(ErrorCode::out_of_range, "time outside the traced path");
    }
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(times.begin(), it));
    i = std::clamp<std::size_t>(i, 1, times.size() - 1) - 1;
    const double h = times[i + 1] - times[i];
    if (h == 0.0) return points[i];
    const double q = (t - times[i]) / h;
    const double h00 = 2 * q * q * q - 3 * q * q + 1;
    const double h10 = q * q * q - 2 * q * q + q;
    const double h01 = -2 * q * q * q + 3 * q * q;
    const double h11 = q * q * q - q * q;
    return h00 * points[i] + (h10 * h) * velocities[i] + h01 * points[i + 1] + (h11 * h) * velocities[i + 1];
  }
};

struct GeodesicOptions {
  double conservation_tol = 1e-6;  // relative F drift allowed per unit length
  bool throw_on_drift = true;      // else stop with status step_too_large
};

// Acceleration from the Euler-Lagrange equations of E = 1/2 F^2:
//   g(x, y) x'' = dE/dx - (d2E / dy dx) x'
// with E depending on position only through p = grad f.
inline Vec2 geodesic_acceleration(const SurfaceSpec& surf, Vec2 pos, Vec2 vel, NavigationParams nav) {
  const TangentPlane plane = tangent_plane(surf, pos.x, pos.y);
  const Sym2 hess = surf.hessian(pos.x, pos.y);
  const EnergyDerivatives d = plane.energy_derivatives(vel, nav);
  const Vec2 dE_dx = hess.apply(d.d_dp);
  const Vec2 mixed = d.d2_dydp.apply(hess.apply(vel));
  return d.d2_dydy.solve(dE_dx - mixed);
}

// Shoots a unit-F-speed geodesic from start along dir with classic RK4,
// stopping at the requested length or on leaving the strong-convexity domain.
inline GeodesicPath geodesic_shoot(const SurfaceSpec& surf, Vec2 start, Vec2 dir, double length, double step,
                                   NavigationParams nav = NavigationParams::normalized(),
                                   const GeodesicOptions& options = {}) {
  nav.validate();
  if (!(step > 0.0) || !(length >= 0.0)) throw Error(ErrorCode::invalid_argument, "step must be > 0, length >= 0");
  const double threshold = convexity_threshold_for(nav);
  if (is_strongly_convex_at(surf, start.x, start.y, 1e-9, threshold) != Verdict::convex) {
    throw Error(ErrorCode::left_convex_domain, "start point is not inside the strong-convexity domain");
  }
  GeodesicPath path;
  path.step = step;
  Vec2 pos = start;
  Vec2 vel = dir / tangent_plane(surf, pos.x, pos.y).F(dir, nav);
  const double f0 = tangent_plane(surf, pos.x, pos.y).F(vel, nav);
  path.points.push_back(pos);
  path.velocities.push_back(vel);
  path.times.push_back(0.0);
  path.F_values.push_back(f0);

  const auto accel = [&](Vec2 p, Vec2 v) { return geodesic_acceleration(surf, p, v, nav); };
  double t = 0.0;
  for (std::size_t k = 1; t < length; ++k) {
    const double t_next = std::min(length, static_cast<double>(k) * step);
    const double h = t_next - t;
    if (h <= 1e-15 * std::max(1.0, length)) break;
    Vec2 next_pos, next_vel;
    try {
      const Vec2 k1x = vel, k1v = accel(pos, vel);
      const Vec2 k2x = vel + 0.5 * h * k1v, k2v = accel(pos + 0.5 * h * k1x, k2x);
      const Vec2 k3x = vel + 0.5 * h * k2v, k3v = accel(pos + 0.5 * h * k2x, k3x);
      const Vec2 k4x = vel + h * k3v, k4v = accel(pos + h * k3x, k4x);
      next_pos = pos + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      next_vel = vel + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    } catch (const Error& e) {
      path.status = e.code() == ErrorCode::degenerate_denominator ? PathStatus::left_convex_domain
                                                                    : PathStatus::left_surface_domain;
      return path;
    }
    Verdict verdict;
    try {
      verdict = is_strongly_convex_at(surf, next_pos.x, next_pos.y, 1e-9, threshold);
    } catch (const Error&) {
      path.status = PathStatus::left_surface_domain;
      return path;
    }
    if (verdict != Verdict::convex) {
      path.status = PathStatus::left_convex_domain;
      return path;
    }
    const double f = tangent_plane(surf, next_pos.x, next_pos.y).F(next_vel, nav);
    t = t_next;
    const double allowed = 10.0 * options.conservation_tol * std::max(1.0, t);
    if (std::abs(f - f0) / f0 > allowed) {
      if (options.throw_on_drift) {
        throw Error(ErrorCode::step_too_large, "F drifted beyond 10x the conservation tolerance");
      }
      path.status = PathStatus::step_too_large;
      return path;
    }
    pos = next_pos;
    vel = next_vel;
    path.points.push_back(pos);
    path.velocities.push_back(vel);
    path.times.push_back(t);
    path.F_values.push_back(f);
  }
  return path;
}

// ---------------------------------------------------------------------------
// Wavefronts
// ---------------------------------------------------------------------------

struct Front {
  double t = 0.0;
  std::vector<Vec2> points;
  std::vector<std::size_t> ray_ids;
};

struct Wavefront {
  Vec2 seed;
  std::vector<GeodesicPath> rays;
  std::vector<Front> fronts;
};

// Fires n_rays unit-speed geodesics from the seed at equally spaced chart
// angles and slices them at n_fronts equally spaced times. A ray that stops
// early drops out of later fronts.
inline Wavefront wavefront(const SurfaceSpec& surf, Vec2 seed, double total_time, std::size_t n_rays, double step,
                           NavigationParams nav = NavigationParams::normalized(), std::size_t n_fronts = 10) {
  if (n_rays < 3) throw Error(ErrorCode::invalid_argument, "wavefront needs at least 3 rays");
  if (n_fronts < 1) throw Error(ErrorCode::invalid_argument, "wavefront needs at least 1 front");
  Wavefront out;
  out.seed = seed;
  GeodesicOptions options;
  options.throw_on_drift = false;
  for (std::size_t k = 0; k < n_rays; ++k) {
    const Vec2 dir = polar(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_rays));
    out.rays.push_back(geodesic_shoot(surf, seed, dir, total_time, step, nav, options));
  }
  for (std::size_t j = 1; j <= n_fronts; ++j) {
    Front front;
    front.t = total_time * static_cast<double>(j) / static_cast<double>(n_fronts);
    for (std::size_t k = 0; k < n_rays; ++k) {
      const GeodesicPath& ray = out.rays[k];
      if (ray.length() + 1e-12 < front.t) continue;
      front.points.push_back(ray.position_at(std::min(front.t, ray.length())));
      front.ray_ids.push_back(k);
    }
    out.fronts.push_back(std::move(front));
  }
  return out;
}

}  // namespace slope
