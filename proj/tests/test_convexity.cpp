#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "slope/convexity.hpp"

using namespace slope;

namespace {

SurfaceSpec rev(const ProfileCurve& p) { return SurfaceSpec::revolution(p); }

}  // namespace

TEST(IsStronglyConvexAt, Examples) {
  EXPECT_EQ(is_strongly_convex_at(SurfaceSpec::flat(), 3.0, -2.0), Verdict::convex);
  const SurfaceSpec par = rev(ProfileCurve::paraboloid(100.0));
  EXPECT_EQ(is_strongly_convex_at(par, 0.2, 0.0), Verdict::convex);
  EXPECT_EQ(is_strongly_convex_at(par, 0.0, 0.4), Verdict::not_convex);
  const SurfaceSpec cone = rev(ProfileCurve::cone(0.6));
  for (double s : {0.1, 1.0, 50.0}) EXPECT_EQ(is_strongly_convex_at(cone, s, 0.0), Verdict::not_convex);
  EXPECT_THROW(is_strongly_convex_at(cone, 0.0, 0.0), Error);
}

TEST(IsStronglyConvexAt, IndeterminateBand) {
  EXPECT_EQ(classify_gradient_norm(1.0 / 3.0), Verdict::indeterminate);
  EXPECT_EQ(classify_gradient_norm(1.0 / 3.0 + 5e-10), Verdict::indeterminate);
  EXPECT_EQ(classify_gradient_norm(1.0 / 3.0 + 2e-9), Verdict::not_convex);
  EXPECT_EQ(classify_gradient_norm(1.0 / 3.0 - 2e-9), Verdict::convex);
}

TEST(IsStronglyConvexAt, DependsOnlyOnRadius) {
  const SurfaceSpec surf = rev(ProfileCurve::ellipsoid(1.0, 1.0));
  for (double s : {0.1, 0.3, 0.49, 0.51, 0.8}) {
    const Verdict ref = is_strongly_convex_at(surf, s, 0.0);
    for (int k = 0; k < 16; ++k) {
      const Vec2 p = polar(2.0 * std::numbers::pi * k / 16.0, s);
      EXPECT_EQ(is_strongly_convex_at(surf, p.x, p.y), ref) << "s=" << s << " k=" << k;
    }
  }
}

TEST(ConvexityThreshold, NavigationGeneralisation) {
  EXPECT_DOUBLE_EQ(convexity_threshold_for(NavigationParams::normalized()), 1.0 / 3.0);
  EXPECT_TRUE(std::isinf(convexity_threshold_for({1.0, 0.4})));
  EXPECT_NEAR(convexity_threshold_for({1.0, 2.0}), 1.0 / 15.0, 1e-15);
}

TEST(CartesianCondition, Examples) {
  for (double s : {0.2, 3.0}) EXPECT_DOUBLE_EQ(cartesian_condition(ProfileCurve::cone(0.5), s), 0.25);
  EXPECT_NEAR(cartesian_condition(ProfileCurve::ellipsoid(1.0, 1.0), 0.5), 1.0 / 3.0, 1e-15);
  const double peak = cartesian_condition(ProfileCurve::gaussian(), std::sqrt(0.5));
  EXPECT_NEAR(peak, std::exp(-1.0) / 12.0, 1e-15);
  EXPECT_NEAR(peak, 0.030656, 1e-6);
  EXPECT_NEAR(1.0 / peak, 32.6, 0.05);
}

TEST(TrigCondition, Examples) {
  const TrigProfile par = TrigProfile::from(ProfileCurve::paraboloid(100.0));
  for (double u : {99.0, 99.5, 99.9}) EXPECT_NEAR(trig_condition(par, u), 1.0 / (4.0 * (100.0 - u)), 1e-12);
  EXPECT_LT(trig_condition(par, 100.0 - 1.0 / 12.0 - 1e-6), 3.0);
  EXPECT_GT(trig_condition(par, 100.0 - 1.0 / 12.0 + 1e-6), 3.0);
  EXPECT_TRUE(std::isinf(trig_condition(par, 100.0)));
  const TrigProfile gauss = TrigProfile::from(ProfileCurve::gaussian());
  EXPECT_NEAR(trig_condition(gauss, std::exp(-0.5) / (2.0 * std::sqrt(6.0))), 12.0 * std::exp(1.0), 1e-9);
}

TEST(TrigCondition, ReciprocalOfCartesian) {
  for (const ProfileCurve& p : {ProfileCurve::paraboloid(100.0), ProfileCurve::cone(0.5),
                                ProfileCurve::ellipsoid(1.0, 2.0), ProfileCurve::hyperboloid2(0.5, 1.0),
                                ProfileCurve::hyperboloid1(0.5, 1.0), ProfileCurve::gaussian()}) {
    for (const TrigProfile& t : {TrigProfile::from(p), TrigProfile::numeric(p)}) {
      for (double ds : {0.05, 0.3, 0.7}) {
        const double s = p.domain().lo + ds;
        EXPECT_NEAR(trig_condition(t, p.value(s)) * cartesian_condition(p, s), 1.0, 1e-8) << p.name();
      }
    }
  }
}

TEST(ConvexityDomain, Paraboloid) {
  const auto d = convexity_domain(ProfileCurve::paraboloid(100.0), 1024);
  ASSERT_EQ(d.intervals.size(), 1u);
  ASSERT_EQ(d.boundary_roots.size(), 1u);
  EXPECT_EQ(d.intervals[0].lo, 0.0);
  EXPECT_NEAR(d.boundary_roots[0].location, 0.28867513, 1e-8);
  EXPECT_LE(std::abs(d.boundary_roots[0].residual), 1e-9);
}

TEST(ConvexityDomain, OneSheetHyperboloid) {
  const auto d = convexity_domain(ProfileCurve::hyperboloid1(0.5, 1.0), 1024);
  ASSERT_EQ(d.intervals.size(), 1u);
  EXPECT_NEAR(d.intervals[0].lo, 2.0, 1e-7);
  EXPECT_EQ(d.intervals[0].hi, 100.0);
  EXPECT_TRUE(d.clipped);
  ASSERT_TRUE(d.asymptote.has_value());
  EXPECT_DOUBLE_EQ(*d.asymptote, 0.25);
}

TEST(ConvexityDomain, ConeAndTwoSheetCoverEverything) {
  EXPECT_TRUE(convexity_domain(ProfileCurve::cone(0.5), 256).covers_scan());
  EXPECT_TRUE(convexity_domain(ProfileCurve::hyperboloid2(0.5, 1.0), 256).covers_scan());
  EXPECT_TRUE(convexity_domain(ProfileCurve::cone(0.7), 256).intervals.empty());
  EXPECT_FALSE(is_globally_convex(ProfileCurve::hyperboloid2(0.6, 1.0)));
}

TEST(ConvexityDomain, BoundaryResidualsAndOrdering) {
  for (const ProfileCurve& p : {ProfileCurve::paraboloid(3.0), ProfileCurve::ellipsoid(1.0, 1.0),
                                ProfileCurve::ellipsoid(2.0, 0.5), ProfileCurve::hyperboloid1(0.3, 2.0)}) {
    const auto d = convexity_domain(p, 512);
    EXPECT_FALSE(d.boundary_roots.empty()) << p.name();
    for (const auto& r : d.boundary_roots) {
      const double phi = p.derivative(r.location);
      EXPECT_LE(std::abs(phi * phi - 1.0 / 3.0), 1e-9) << p.name();
    }
    for (std::size_t i = 0; i < d.intervals.size(); ++i) {
      EXPECT_LT(d.intervals[i].lo, d.intervals[i].hi);
      if (i > 0) {
        EXPECT_LE(d.intervals[i - 1].hi, d.intervals[i].lo);
      }
    }
  }
}

TEST(ConvexityDomain, EllipsoidCorollaryFormula) {
  for (auto [a, c] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{1.0, 3.0}}) {
    const auto d = convexity_domain(ProfileCurve::ellipsoid(a, c), 1024);
    ASSERT_EQ(d.boundary_roots.size(), 1u);
    EXPECT_NEAR(d.boundary_roots[0].location, a * a / std::sqrt(a * a + 3 * c * c), 1e-9);
  }
}

TEST(ConvexityDomain, RejectsCoarseResolution) {
  EXPECT_THROW(convexity_domain(ProfileCurve::paraboloid(1.0), 32), Error);
}

TEST(ConvexityDomain, WarnsOnTangentialGrazing) {
  // The Gaussian slope peaks at e^-1/12; a threshold at that value is touched, not crossed.
  DomainOptions opts;
  opts.threshold = std::exp(-1.0) / 12.0;
  opts.clip = 5.0;
  const auto d = convexity_domain(ProfileCurve::gaussian(), 1000, opts);
  EXPECT_FALSE(d.warnings.empty());
}

TEST(ConvexityDomainU, ParaboloidHeightInterval) {
  const auto d = convexity_domain_u(TrigProfile::from(ProfileCurve::paraboloid(100.0)), 1024);
  EXPECT_EQ(d.variable, ConvexityDomain::Variable::u);
  ASSERT_EQ(d.boundary_roots.size(), 1u);
  EXPECT_NEAR(d.boundary_roots[0].location, 100.0 - 1.0 / 12.0, 1e-9);
  ASSERT_EQ(d.intervals.size(), 1u);
  EXPECT_NEAR(d.intervals[0].hi, 100.0, 1e-6);
}

TEST(PdOracle, Examples) {
  EXPECT_TRUE(pd_oracle(SurfaceSpec::flat(), 0.4, 0.4).positive_definite);
  const SurfaceSpec par = rev(ProfileCurve::paraboloid(100.0));
  EXPECT_TRUE(pd_oracle(par, 0.2, 0.0).positive_definite);
  EXPECT_FALSE(pd_oracle(par, 0.0, 0.4).positive_definite);
  const SurfaceSpec cone = rev(ProfileCurve::cone(0.7));
  for (double s : {0.01, 1.0, 20.0}) EXPECT_FALSE(pd_oracle(cone, 0.0, s).positive_definite);
}

TEST(PdOracle, Errors) {
  const SurfaceSpec par = rev(ProfileCurve::paraboloid(100.0));
  try {
    pd_oracle(par, 0.1, 0.0, NavigationParams::normalized(), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::insufficient_directions);
  }
  EXPECT_THROW(pd_oracle(par, 0.1, 0.0, {2.0, 1.0}), Error);
}

TEST(PdOracle, TracksThresholdClosely) {
  // Just inside and just outside |grad f|^2 = 1/3 on a cone.
  const double edge = 1.0 / std::sqrt(3.0);
  EXPECT_TRUE(pd_oracle(rev(ProfileCurve::cone(edge - 1e-3)), 1.0, 0.0).positive_definite);
  EXPECT_FALSE(pd_oracle(rev(ProfileCurve::cone(edge + 1e-3)), 1.0, 0.0).positive_definite);
}

TEST(VerifyEquivalence, BuiltinsAgree) {
  for (const ProfileCurve& p : {ProfileCurve::paraboloid(100.0), ProfileCurve::ellipsoid(1.0, 1.0),
                                ProfileCurve::gaussian()}) {
    SampleSpec spec;
    const EquivalenceReport r = verify_equivalence(rev(p), spec);
    EXPECT_EQ(r.samples, 200u);
    EXPECT_EQ(r.agreements, 200u) << p.name();
    EXPECT_TRUE(r.disagreements.empty());
    EXPECT_EQ(r.trig_evaluated, 200u);
    EXPECT_GE(r.worst_margin, 0.0);
  }
}

TEST(VerifyEquivalence, GaussianIsConvexEverywhere) {
  SampleSpec spec;
  spec.count = 50;
  const SurfaceSpec surf = rev(ProfileCurve::gaussian());
  const EquivalenceReport r = verify_equivalence(surf, spec);
  EXPECT_EQ(r.agreements, 50u);
  EXPECT_GT(r.worst_margin, 1.0 / 3.0 - 0.031);
}

TEST(VerifyEquivalence, CorruptedThresholdDisagrees) {
  SampleSpec spec;
  spec.threshold = 0.5;
  const EquivalenceReport r = verify_equivalence(rev(ProfileCurve::paraboloid(100.0)), spec);
  EXPECT_FALSE(r.disagreements.empty());
  const auto& first = r.disagreements.front().predicates;
  ASSERT_TRUE(first.oracle.has_value());
  ASSERT_TRUE(first.analytic.has_value());
  EXPECT_NE(*first.oracle, *first.analytic);
}

TEST(VerifyEquivalence, GeneralGraphSurface) {
  // A tilted plane z = 0.4 x + 0.3 y is convex (0.25 < 1/3); steeper is not.
  const SurfaceSpec gentle = SurfaceSpec::graph([](double x, double y) { return 0.4 * x + 0.3 * y; });
  const SurfaceSpec steep = SurfaceSpec::graph([](double x, double y) { return 0.6 * x + 0.3 * y; });
  SampleSpec spec;
  spec.count = 40;
  EXPECT_EQ(verify_equivalence(gentle, spec).agreements, 40u);
  EXPECT_EQ(verify_equivalence(steep, spec).agreements, 40u);
  EXPECT_FALSE(pd_oracle(steep, 0.0, 0.0).positive_definite);
}
