#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "slope/geodesics.hpp"

using namespace slope;

namespace {

const SurfaceSpec& paraboloid() {
  static const SurfaceSpec s = SurfaceSpec::revolution(ProfileCurve::paraboloid(100.0));
  return s;
}

}  // namespace

TEST(FitLimacon, RecoversCoefficients) {
  std::vector<double> r, th;
  for (int k = 0; k < 90; ++k) {
    th.push_back(-3.0 + 0.066 * k);
    r.push_back(1.3 + 0.4 * std::cos(th.back()));
  }
  const LimaconFit fit = fit_limacon(r, th);
  EXPECT_NEAR(fit.c0, 1.3, 1e-13);
  EXPECT_NEAR(fit.c1, 0.4, 1e-13);
  EXPECT_LT(fit.residual, 1e-13);
}

TEST(Indicatrix, FlatIsUnitCircle) {
  const Indicatrix ind = indicatrix(SurfaceSpec::flat(), 0.0, 0.0);
  EXPECT_TRUE(ind.frame_degenerate);
  EXPECT_FALSE(ind.non_convex);
  for (const Vec2& p : ind.samples) EXPECT_NEAR(norm(p), 1.0, 1e-14);
  EXPECT_NEAR(ind.fit.c0, 1.0, 1e-12);
  EXPECT_NEAR(ind.fit.c1, 0.0, 1e-12);
}

TEST(Indicatrix, ParaboloidLimacon) {
  const Indicatrix ind = indicatrix(paraboloid(), 0.1, 0.0);
  EXPECT_FALSE(ind.non_convex);
  EXPECT_LE(ind.max_unit_residual, 1e-9);
  EXPECT_LE(ind.fit.residual, 1e-6);
  EXPECT_NEAR(ind.fit.c0, 1.0, 1e-6);
  // Cosine coefficient is |beta|_alpha = sqrt(G / (1 + G)) with G = 0.04.
  EXPECT_NEAR(ind.fit.c1, std::sqrt(0.04 / 1.04), 1e-12);
  // Frame: e1 points downhill (+x here) and is a-unit; e2 is a-orthogonal.
  const Sym2 a = induced_metric(paraboloid(), 0.1, 0.0).matrix();
  EXPECT_GT(ind.e1.x, 0.0);
  EXPECT_NEAR(a.quad(ind.e1), 1.0, 1e-14);
  EXPECT_NEAR(a.quad(ind.e2), 1.0, 1e-14);
  EXPECT_NEAR(a.bilinear(ind.e1, ind.e2), 0.0, 1e-14);
  // Largest chart radius lies downhill; ratio of radii is F(up)/F(down).
  double best = 0.0;
  Vec2 far{};
  for (const Vec2& p : ind.samples) {
    if (norm(p) > best) {
      best = norm(p);
      far = p;
    }
  }
  EXPECT_GT(far.x, 0.0);
  EXPECT_NEAR(norm(ind.samples.front()) / norm(ind.samples[ind.samples.size() / 2]), (std::sqrt(1.04) + 0.2) / (std::sqrt(1.04) - 0.2), 1e-12);
}

TEST(Indicatrix, ClosureWithinOneArc) {
  const Indicatrix ind = indicatrix(paraboloid(), 0.05, 0.12, {}, 128);
  const double arc = 2.0 * std::numbers::pi / 128.0;
  double radius = 0.0;
  for (const Vec2& p : ind.samples) radius = std::max(radius, norm(p));
  EXPECT_LE(norm(ind.samples.back() - ind.samples.front()), arc * radius * 1.01);
}

TEST(Indicatrix, LimaconFitOnEveryBuiltin) {
  for (const ProfileCurve& p : {ProfileCurve::cone(0.5), ProfileCurve::ellipsoid(1.0, 1.0),
                                ProfileCurve::hyperboloid1(0.5, 1.0), ProfileCurve::gaussian()}) {
    const SurfaceSpec surf = SurfaceSpec::revolution(p);
    const Vec2 pt = polar(0.6, p.domain().lo + 0.4);
    const Indicatrix ind = indicatrix(surf, pt.x, pt.y);
    const double G = norm_sq(gradient(surf, pt.x, pt.y));
    EXPECT_LE(ind.fit.residual, 1e-6) << p.name();
    EXPECT_NEAR(ind.fit.c0, 1.0, 1e-6) << p.name();
    EXPECT_NEAR(ind.fit.c1, std::sqrt(G / (1.0 + G)), 1e-9) << p.name();
  }
}

TEST(Indicatrix, NavigationRadius) {
  const NavigationParams nav{2.0, 0.5};
  const Indicatrix ind = indicatrix(paraboloid(), 0.1, 0.0, nav);
  EXPECT_NEAR(ind.fit.c0, 2.0, 1e-9);
  EXPECT_NEAR(ind.fit.c1, 0.5 * std::sqrt(0.04 / 1.04), 1e-9);
}

TEST(Indicatrix, SteepConeIsFlaggedNonConvex) {
  const SurfaceSpec cone = SurfaceSpec::revolution(ProfileCurve::cone(0.7));
  for (double s : {0.3, 2.0}) EXPECT_TRUE(indicatrix(cone, s, 0.0).non_convex);
  EXPECT_FALSE(indicatrix(SurfaceSpec::revolution(ProfileCurve::cone(0.5)), 1.0, 0.0).non_convex);
}

TEST(Indicatrix, ApexIsRejected) {
  try {
    indicatrix(SurfaceSpec::revolution(ProfileCurve::cone(0.5)), 0.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::apex_singularity);
  }
}

TEST(Geodesic, FlatLineIsStraight) {
  const Vec2 start{-0.4, 0.9}, dir{3.0, -4.0};
  const GeodesicPath path = geodesic_shoot(SurfaceSpec::flat(), start, dir, 1.5, 1e-2);
  EXPECT_EQ(path.status, PathStatus::complete);
  EXPECT_NEAR(path.length(), 1.5, 1e-15);
  const Vec2 u = dir / norm(dir);
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    const Vec2 expect = start + path.times[i] * u;
    EXPECT_LE(norm(path.points[i] - expect), 1e-9);
  }
}

TEST(Geodesic, ParaboloidConservesF) {
  const GeodesicPath path = geodesic_shoot(paraboloid(), {0.1, 0.0}, {0.0, 1.0}, 0.2, 1e-3);
  EXPECT_EQ(path.status, PathStatus::complete);
  EXPECT_LE(path.max_relative_drift() / path.length(), 1e-6);
  for (const Vec2& p : path.points) EXPECT_LT(norm(p), 1.0 / std::sqrt(12.0));
  EXPECT_NEAR(path.F_values.front(), 1.0, 1e-14);
}

TEST(Geodesic, FourthOrderConvergence) {
  const auto drift = [](double h) {
    return geodesic_shoot(paraboloid(), {-0.15, 0.05}, {1.0, 0.3}, 0.25, h).max_relative_drift();
  };
  EXPECT_GE(drift(2e-3) / drift(1e-3), 8.0);
}

TEST(Geodesic, HaltsAtConvexityBoundary) {
  const GeodesicPath path = geodesic_shoot(paraboloid(), {0.1, 0.0}, {0.0, 1.0}, 0.5, 1e-3);
  EXPECT_EQ(path.status, PathStatus::left_convex_domain);
  EXPECT_LT(path.length(), 0.5);
  EXPECT_NEAR(norm(path.points.back()), 1.0 / std::sqrt(12.0), 2e-3);
}

TEST(Geodesic, StartOutsideDomainThrows) {
  try {
    geodesic_shoot(paraboloid(), {0.5, 0.0}, {0.0, 1.0}, 0.1, 1e-3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::left_convex_domain);
  }
}

TEST(Geodesic, ReversalIsAsymmetric) {
  const Vec2 a{-0.2, 0.05}, d{1.0, 0.2};
  const GeodesicPath fwd = geodesic_shoot(paraboloid(), a, d, 0.3, 1e-3);
  const Vec2 b = fwd.points.back();
  const Vec2 back_dir = -fwd.velocities.back();
  const GeodesicPath rev = geodesic_shoot(paraboloid(), b, back_dir, 0.3, 1e-3);
  const Vec2 mid_fwd = fwd.position_at(0.15);
  const Vec2 mid_rev = rev.position_at(0.15);
  EXPECT_GT(norm(mid_fwd - mid_rev), 1e-6);
  // Travel times differ too: the reversed ray does not land back on a.
  EXPECT_GT(norm(rev.points.back() - a), 1e-6);
}

TEST(Geodesic, StepTooLargeIsReported) {
  GeodesicOptions options;
  options.conservation_tol = 1e-16;
  const SurfaceSpec gauss = SurfaceSpec::revolution(ProfileCurve::gaussian());
  EXPECT_THROW(geodesic_shoot(gauss, {0.5, 0.0}, {0.0, 1.0}, 1.0, 0.2, {}, options), Error);
  options.throw_on_drift = false;
  EXPECT_EQ(geodesic_shoot(gauss, {0.5, 0.0}, {0.0, 1.0}, 1.0, 0.2, {}, options).status,
            PathStatus::step_too_large);
}

TEST(Geodesic, AccelerationMatchesDifferencedLagrangian) {
  // Euler-Lagrange residual of E(x, y) = 1/2 F^2 with every derivative taken
  // by central differences of the energy itself.
  const SurfaceSpec surf = SurfaceSpec::revolution(ProfileCurve::gaussian());
  const Vec2 x{0.4, -0.3}, y{0.7, 0.5};
  const auto E = [&](Vec2 p, Vec2 v) {
    const double f = slope_metric_F(surf, p.x, p.y, v);
    return 0.5 * f * f;
  };
  const double h = 1e-4;
  const Vec2 ex{h, 0}, ey{0, h};
  const Vec2 dEdx{(E(x + ex, y) - E(x - ex, y)) / (2 * h), (E(x + ey, y) - E(x - ey, y)) / (2 * h)};
  const auto dEdy = [&](Vec2 p, Vec2 v) {
    return Vec2{(E(p, v + ex) - E(p, v - ex)) / (2 * h), (E(p, v + ey) - E(p, v - ey)) / (2 * h)};
  };
  const Vec2 acc = geodesic_acceleration(surf, x, y, {});
  // d/dt dE/dy along (x + t y, y + t acc) must equal dE/dx.
  const double dt = 1e-4;
  const Vec2 total = (dEdy(x + dt * y, y + dt * acc) - dEdy(x - dt * y, y - dt * acc)) / (2 * dt);
  EXPECT_NEAR(total.x, dEdx.x, 1e-6);
  EXPECT_NEAR(total.y, dEdx.y, 1e-6);
}

TEST(Wavefront, FlatFrontsAreCircles) {
  const Wavefront wf = wavefront(SurfaceSpec::flat(), {0.2, -0.1}, 1.0, 24, 1e-2, {}, 4);
  ASSERT_EQ(wf.fronts.size(), 4u);
  for (const Front& f : wf.fronts) {
    ASSERT_EQ(f.points.size(), 24u);
    for (const Vec2& p : f.points) EXPECT_NEAR(norm(p - wf.seed), f.t, 1e-9);
  }
}

TEST(Wavefront, ParaboloidFrontIsElongatedDownhill) {
  const Vec2 seed{0.1, 0.0};
  const double t = 0.02;
  const Wavefront wf = wavefront(paraboloid(), seed, t, 64, 1e-3, {}, 1);
  // Ray 0 points along +x (downhill), ray 32 along -x (uphill).
  const double down = norm(wf.rays[0].points.back() - seed);
  const double up = norm(wf.rays[32].points.back() - seed);
  EXPECT_NEAR((down / up) / (1.268596 / 0.852596), 1.0, 0.05);
}

TEST(Wavefront, GaussianRaysAllComplete) {
  const Wavefront wf = wavefront(SurfaceSpec::revolution(ProfileCurve::gaussian()), {1.0, 0.0}, 0.5, 64, 1e-2);
  ASSERT_EQ(wf.rays.size(), 64u);
  for (const GeodesicPath& ray : wf.rays) EXPECT_EQ(ray.status, PathStatus::complete);
  EXPECT_EQ(wf.fronts.back().points.size(), 64u);
}

TEST(Wavefront, TruncatedRaysDropOut) {
  const Wavefront wf = wavefront(paraboloid(), {0.2, 0.0}, 0.3, 16, 1e-3, {}, 3);
  std::size_t stopped = 0;
  for (const GeodesicPath& ray : wf.rays) stopped += ray.status == PathStatus::left_convex_domain;
  EXPECT_GT(stopped, 0u);
  EXPECT_LT(wf.fronts.back().points.size(), 16u);
}
