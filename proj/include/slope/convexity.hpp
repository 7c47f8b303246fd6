#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "slope/error.hpp"
#include "slope/metric.hpp"
#include "slope/numeric.hpp"
#include "slope/profile.hpp"
#include "slope/surface.hpp"

namespace slope {

// Strong convexity holds where |grad f|^2 < 1/3, equivalently phi'^2 < 1/3,
// equivalently m'^2 > 3.
inline constexpr double convexity_threshold = 1.0 / 3.0;

// Bound on |grad f|^2 for general nav: F = (1/v) alpha^2 / (alpha - (w/v) beta)
// is strongly convex iff (w/v)^2 G / (1 + G) < 1/4. Infinite when w <= v/2.
inline double convexity_threshold_for(NavigationParams nav) {
  const double k = nav.w / nav.v;
  const double excess = 4.0 * k * k - 1.0;
  return excess > 0.0 ? 1.0 / excess : numeric::infinity;
}

enum class Verdict { convex, not_convex, indeterminate };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::convex: return "convex";
    case Verdict::not_convex: return "not_convex";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "unknown";
}

inline Verdict classify_gradient_norm(double grad_norm_sq, double band = 1e-9,
                                      double threshold = convexity_threshold) {
  if (grad_norm_sq < threshold - band) return Verdict::convex;
  if (grad_norm_sq > threshold + band) return Verdict::not_convex;
  return Verdict::indeterminate;
}

inline Verdict is_strongly_convex_at(const SurfaceSpec& surf, double x, double y, double band = 1e-9,
                                     double threshold = convexity_threshold) {
  return classify_gradient_norm(norm_sq(surf.gradient(x, y)), band, threshold);
}

// phi'(s)^2; convex at radius s iff below 1/3.
inline double cartesian_condition(const ProfileCurve& p, double s) {
  const double d = p.derivative(s);
  return d * d;
}

// m'(u)^2; convex at height u iff above 3. Infinite where phi' vanishes.
inline double trig_condition(const TrigProfile& t, double u) {
  try {
    const double d = t.m_prime(u);
    return d * d;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::derivative_blowup) return numeric::infinity;
    throw;
  }
}

struct BoundaryRoot {
  double location = 0.0;
  double residual = 0.0;  // |criterion(location) - threshold|
};

struct OpenInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ConvexityDomain {
  enum class Variable { s, u };

  Variable variable = Variable::s;
  double scan_lo = 0.0;
  double scan_hi = 0.0;
  bool clipped = false;  // scan range stops short of an unbounded domain
  std::vector<OpenInterval> intervals;
  std::vector<BoundaryRoot> boundary_roots;
  std::optional<double> asymptote;  // limit of the criterion at the far end
  std::vector<std::string> warnings;

  // True when the condition holds on the whole scanned range.
  bool covers_scan() const {
    return boundary_roots.empty() && intervals.size() == 1 && intervals.front().lo == scan_lo &&
           intervals.front().hi == scan_hi;
  }
};

struct DomainOptions {
  double clip = 100.0;
  double root_tol = 1e-10;
  double threshold = convexity_threshold;
};

namespace detail {

// Scans criterion - threshold for sign changes on [lo, hi], refines roots by
// bisection and assembles the open intervals where `holds` is true.
template <class Criterion, class Holds>
void scan_domain(ConvexityDomain& out, Criterion&& criterion, Holds&& holds, double threshold,
                 std::size_t resolution, double root_tol) {
  const double lo = out.scan_lo;
  const double hi = out.scan_hi;
  const auto gap = [&](double t) {
    const double c = criterion(t);
    return std::isinf(c) ? (c > 0 ? 1.0 : -1.0) : c - threshold;
  };
  std::vector<double> grid(resolution + 1), values(resolution + 1);
  for (std::size_t i = 0; i <= resolution; ++i) {
    grid[i] = i == resolution ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution);
    values[i] = gap(grid[i]);
  }
  std::vector<double> roots;
  for (std::size_t i = 1; i <= resolution; ++i) {
    const double a = values[i - 1], b = values[i];
    if (a == 0.0) {
      if (roots.empty() || roots.back() != grid[i - 1]) roots.push_back(grid[i - 1]);
    } else if (b != 0.0 && std::signbit(a) != std::signbit(b)) {
      roots.push_back(numeric::bisect(gap, grid[i - 1], grid[i], root_tol));
    }
    // Local minimum of |gap| without a sign change suggests a double root.
    if (i + 1 <= resolution && a != 0.0 && b != 0.0 && values[i + 1] != 0.0 &&
        std::signbit(a) == std::signbit(b) && std::signbit(b) == std::signbit(values[i + 1]) &&
        std::abs(b) < std::abs(a) && std::abs(b) < std::abs(values[i + 1]) && std::abs(b) < 1e-6) {
      out.warnings.push_back("criterion grazes the threshold near " + std::to_string(grid[i]) +
                             " (double root suspected)");
    }
  }
  if (values[resolution] == 0.0 && (roots.empty() || roots.back() != hi)) roots.push_back(hi);

  for (double r : roots) out.boundary_roots.push_back({r, std::abs(criterion(r) - threshold)});

  std::vector<double> cuts{lo};
  for (double r : roots) {
    if (r > cuts.back()) cuts.push_back(r);
  }
  if (hi > cuts.back()) cuts.push_back(hi);
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i - 1] + cuts[i]);
    if (holds(criterion(mid))) out.intervals.push_back({cuts[i - 1], cuts[i]});
  }
}

}  // namespace detail

// Radial intervals where phi'(s)^2 < threshold. Unbounded domains are scanned
// up to options.clip; open or singular ends are nudged inward.
inline ConvexityDomain convexity_domain(const ProfileCurve& p, std::size_t resolution,
                                        const DomainOptions& options = {}) {
  if (resolution < 64) throw Error(ErrorCode::invalid_argument, "resolution must be >= 64");
  const RadialDomain& d = p.domain();
  ConvexityDomain out;
  out.variable = ConvexityDomain::Variable::s;
  double hi = d.hi;
  if (!d.bounded() || d.hi > options.clip) {
    if (options.clip <= d.lo) throw Error(ErrorCode::out_of_domain, "scan clip lies below the profile domain");
    hi = options.clip;
    out.clipped = true;
  }
  const double width = hi - d.lo;
  double lo = d.lo;
  if (d.lo_open || (d.lo == 0.0 && !p.smooth_axis())) lo += 1e-9 * width;
  if (!out.clipped) hi -= 1e-9 * width;
  out.scan_lo = lo;
  out.scan_hi = hi;
  if (out.clipped) out.asymptote = p.asymptotic_slope_sq();
  detail::scan_domain(
      out, [&](double s) { return cartesian_condition(p, s); },
      [&](double c) { return c < options.threshold; }, options.threshold, resolution, options.root_tol);
  return out;
}

// Height intervals where m'(u)^2 > 1/threshold.
inline ConvexityDomain convexity_domain_u(const TrigProfile& t, std::size_t resolution,
                                          const DomainOptions& options = {}) {
  if (resolution < 64) throw Error(ErrorCode::invalid_argument, "resolution must be >= 64");
  const HeightDomain& d = t.domain();
  ConvexityDomain out;
  out.variable = ConvexityDomain::Variable::u;
  double lo = d.lo, hi = d.hi;
  if (!std::isfinite(lo)) {
    lo = hi - options.clip;
    out.clipped = true;
  }
  if (!std::isfinite(hi)) {
    hi = lo + options.clip;
    out.clipped = true;
  }
  const double width = hi - lo;
  if (!d.lo_closed && std::isfinite(d.lo)) lo += 1e-9 * width;
  if (!d.hi_closed && std::isfinite(d.hi)) hi -= 1e-9 * width;
  out.scan_lo = lo;
  out.scan_hi = hi;
  const double target = 1.0 / options.threshold;
  detail::scan_domain(
      out, [&](double u) { return trig_condition(t, u); }, [&](double c) { return c > target; }, target,
      resolution, options.root_tol);
  return out;
}

// Whole-surface verdict: the condition holds on the entire scanned domain.
inline bool is_globally_convex(const ProfileCurve& p, const DomainOptions& options = {},
                               std::size_t resolution = 1024) {
  return convexity_domain(p, resolution, options).covers_scan();
}

struct OracleResult {
  bool positive_definite = false;
  Definiteness worst = Definiteness::positive_definite;
  double min_det_ratio = numeric::infinity;  // min of det g / (tr g / 2)^2
  std::size_t directions = 0;
};

// Brute-force strong convexity: finite-difference fundamental tensor at
// equally spaced directions. The angle grid starts at the gradient direction,
// where the tensor is least positive.
inline OracleResult pd_oracle(const SurfaceSpec& surf, double x, double y,
                              NavigationParams nav = NavigationParams::normalized(),
                              std::size_t n_directions = 64, double step = 1e-4) {
  if (!nav.is_normalized()) throw Error(ErrorCode::invalid_argument, "pd_oracle requires normalized nav");
  if (n_directions < 8) throw Error(ErrorCode::insufficient_directions, "need at least 8 directions");
  const TangentPlane plane = tangent_plane(surf, x, y);
  const Vec2 grad = plane.gradient();
  const double start = (grad.x == 0.0 && grad.y == 0.0) ? 0.0 : std::atan2(grad.y, grad.x);
  OracleResult out;
  out.positive_definite = true;
  out.directions = n_directions;
  for (std::size_t k = 0; k < n_directions; ++k) {
    const double angle = start + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_directions);
    const FundamentalTensor g = plane.fundamental_tensor_fd(polar(angle), nav, step);
    if (!(g.trace() > 0.0 && g.det() > 0.0)) out.positive_definite = false;
    const double tr = g.trace();
    out.min_det_ratio = std::min(out.min_det_ratio, tr > 0.0 ? g.det() / (0.25 * tr * tr) : -numeric::infinity);
    const Definiteness cls = g.classify();
    if (cls == Definiteness::not_positive_definite ||
        (cls == Definiteness::indeterminate && out.worst == Definiteness::positive_definite)) {
      out.worst = cls;
    }
  }
  return out;
}

struct SampleSpec {
  std::size_t count = 200;
  std::uint64_t seed = 1;
  double band = 1e-3;  // exclusion distance from predicted boundaries
  std::optional<double> r_lo;
  std::optional<double> r_hi;
  std::size_t directions = 64;
  double threshold = convexity_threshold;  // test hook for negative controls
  double predicate_band = 1e-9;
};

struct PredicateValues {
  std::optional<bool> analytic;   // |grad f|^2 < threshold
  std::optional<bool> cartesian;  // phi'(s)^2 < threshold
  std::optional<bool> trig;       // m'(u)^2 > 1/threshold
  std::optional<bool> oracle;     // fundamental tensor PD in every direction
};

struct SampleOutcome {
  double x = 0.0;
  double y = 0.0;
  PredicateValues predicates;
};

struct EquivalenceReport {
  std::string surface;
  std::size_t samples = 0;
  double band = 0.0;
  std::size_t agreements = 0;
  std::size_t indeterminate = 0;
  std::size_t trig_evaluated = 0;
  std::vector<SampleOutcome> disagreements;
  double worst_margin = numeric::infinity;  // min | |grad f|^2 - threshold |
};

// Default radial sampling window for a revolution surface: the profile
// domain, trimmed away from open or singular ends, up to twice the outermost
// boundary (at least radius 2).
inline std::pair<double, double> default_sample_window(const ProfileCurve& p) {
  const RadialDomain& d = p.domain();
  DomainOptions opts;
  const auto dom = convexity_domain(p, 1024, opts);
  double far = 1.0;
  for (const auto& r : dom.boundary_roots) far = std::max(far, r.location);
  double hi = d.bounded() ? d.lo + 0.99 * (d.hi - d.lo) : d.lo + 2.0 * far;
  double lo = d.lo;
  if (d.lo_open || (d.lo == 0.0 && !p.smooth_axis())) lo += 0.01 * (hi - d.lo);
  return {lo, hi};
}

inline EquivalenceReport verify_equivalence(const SurfaceSpec& surf, const SampleSpec& spec) {
  EquivalenceReport report;
  report.surface = surf.name();
  report.band = spec.band;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const ProfileCurve* profile = surf.profile();
  std::optional<TrigProfile> trig;
  std::vector<double> predicted;
  double r_lo = 0.0, r_hi = 1.0;
  if (profile) {
    try {
      trig = TrigProfile::from(*profile);
    } catch (const Error&) {
      trig.reset();
    }
    auto window = default_sample_window(*profile);
    r_lo = spec.r_lo.value_or(window.first);
    r_hi = spec.r_hi.value_or(window.second);
    DomainOptions opts;
    opts.threshold = spec.threshold;
    opts.clip = std::max(r_hi, profile->domain().lo + 1e-6);
    for (const auto& r : convexity_domain(*profile, 1024, opts).boundary_roots) predicted.push_back(r.location);
  } else {
    const BoundingBox& box = surf.box();
    r_lo = spec.r_lo.value_or(0.0);
    r_hi = spec.r_hi.value_or(std::isfinite(box.x_max) ? std::min({-box.x_min, box.x_max, -box.y_min, box.y_max}) : 1.0);
  }

  std::size_t attempts = 0;
  while (report.samples < spec.count) {
    if (++attempts > 100 * spec.count + 1000) {
      throw Error(ErrorCode::invalid_argument, "sampling window is almost entirely inside the exclusion band");
    }
    double x, y, s;
    if (profile) {
      s = r_lo + (r_hi - r_lo) * unit(rng);
      const double angle = 2.0 * std::numbers::pi * unit(rng);
      x = s * std::cos(angle);
      y = s * std::sin(angle);
      const bool near = std::any_of(predicted.begin(), predicted.end(),
                                    [&](double r) { return std::abs(s - r) < spec.band; });
      if (near || !profile->contains(s)) continue;
    } else {
      x = -r_hi + 2.0 * r_hi * unit(rng);
      y = -r_hi + 2.0 * r_hi * unit(rng);
      s = std::hypot(x, y);
      if (std::abs(norm_sq(surf.gradient(x, y)) - spec.threshold) < spec.band) continue;
    }
    ++report.samples;

    SampleOutcome outcome{x, y, {}};
    const double grad_sq = norm_sq(surf.gradient(x, y));
    report.worst_margin = std::min(report.worst_margin, std::abs(grad_sq - spec.threshold));
    const Verdict analytic = classify_gradient_norm(grad_sq, spec.predicate_band, spec.threshold);
    if (analytic == Verdict::indeterminate) {
      ++report.indeterminate;
    } else {
      outcome.predicates.analytic = analytic == Verdict::convex;
    }
    if (profile) {
      outcome.predicates.cartesian = cartesian_condition(*profile, s) < spec.threshold;
      if (trig) {
        try {
          const double u = profile->value(s);
          outcome.predicates.trig = trig_condition(*trig, u) > 1.0 / spec.threshold;
          ++report.trig_evaluated;
        } catch (const Error&) {
        }
      }
    }
    outcome.predicates.oracle =
        pd_oracle(surf, x, y, NavigationParams::normalized(), spec.directions).positive_definite;

    std::optional<bool> first;
    bool agree = true;
    for (const auto& value : {outcome.predicates.analytic, outcome.predicates.cartesian,
                              outcome.predicates.trig, outcome.predicates.oracle}) {
      if (!value) continue;
      if (!first) first = value;
      else if (*first != *value) agree = false;
    }
    if (agree) ++report.agreements;
    else report.disagreements.push_back(outcome);
  }
  return report;
}

}  // namespace slope
