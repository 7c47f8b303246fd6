#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "slope/io.hpp"
#include "slope/slope.hpp"

namespace slope::cli {

using json = nlohmann::json;

enum ExitCode : int { ok = 0, disagreement = 1, config_failure = 2, geometry_failure = 3 };

// Settings gathered from an optional JSON config file, overridden by flags.
struct RunConfig {
  std::optional<json> surface;
  NavigationParams nav = NavigationParams::normalized();
  std::optional<std::size_t> resolution;
  std::uint64_t seed = 1;
  double band = 1e-3;
  std::optional<std::string> format;
  std::optional<std::string> out;
  bool strict = false;
  std::vector<double> point;
  std::vector<double> direction{1.0, 0.0};
  double length = 0.5;
  double step = 1e-3;
  double time = 0.5;
  std::size_t rays = 64;
  std::size_t fronts = 10;
  std::size_t samples = 200;
  std::size_t directions = 64;
  std::size_t n = 256;
  std::optional<double> extent;
  double clip = 100.0;
  double threshold = convexity_threshold;

  void validate() const {
    const auto fail = [](const std::string& m) { throw Error(ErrorCode::config_error, m); };
    if (resolution && *resolution < 64) fail("resolution must be >= 64");
    if (!(band >= 0.0)) fail("band must be >= 0");
    if (!(step > 0.0) || !(length >= 0.0) || !(time > 0.0)) fail("step, length and time must be positive");
    if (!(threshold > 0.0)) fail("threshold must be positive");
    if (!(clip > 0.0)) fail("clip must be positive");
    if (extent && !(*extent > 0.0)) fail("extent must be positive");
    if (format && *format != "csv" && *format != "json") fail("format must be csv or json");
    if (!point.empty() && point.size() != 2) fail("point takes two coordinates");
    if (direction.size() != 2) fail("direction takes two components");
    try {
      nav.validate();
    } catch (const Error& e) {
      fail(e.what());
    }
  }
};

namespace detail {

inline void apply_config_file(RunConfig& cfg, const json& doc) {
  try {
    if (doc.contains("surface")) {
      const json& s = doc.at("surface");
      cfg.surface = s.is_string() ? io::load_document(s.get<std::string>()) : s;
    }
    if (doc.contains("nav")) {
      cfg.nav.v = doc.at("nav").value("v", 1.0);
      cfg.nav.w = doc.at("nav").value("w", 1.0);
    }
    if (doc.contains("resolution")) cfg.resolution = doc.at("resolution").get<std::size_t>();
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.band = doc.value("band", cfg.band);
    if (doc.contains("format")) cfg.format = doc.at("format").get<std::string>();
    if (doc.contains("out")) cfg.out = doc.at("out").get<std::string>();
    cfg.strict = doc.value("strict", cfg.strict);
    cfg.point = doc.value("point", cfg.point);
    cfg.direction = doc.value("direction", cfg.direction);
    cfg.length = doc.value("length", cfg.length);
    cfg.step = doc.value("step", cfg.step);
    cfg.time = doc.value("time", cfg.time);
    cfg.rays = doc.value("rays", cfg.rays);
    cfg.fronts = doc.value("fronts", cfg.fronts);
    cfg.samples = doc.value("samples", cfg.samples);
    cfg.directions = doc.value("directions", cfg.directions);
    cfg.n = doc.value("n", cfg.n);
    if (doc.contains("extent")) cfg.extent = doc.at("extent").get<double>();
    cfg.clip = doc.value("clip", cfg.clip);
    cfg.threshold = doc.value("threshold", cfg.threshold);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::config_error, std::string("bad config field: ") + e.what());
  }
}

inline SurfaceSpec require_surface(const RunConfig& cfg) {
  if (!cfg.surface) throw Error(ErrorCode::config_error, "no surface given (use --surface or config.surface)");
  return io::parse_surface(*cfg.surface);
}

inline Vec2 require_point(const RunConfig& cfg) {
  if (cfg.point.size() != 2) throw Error(ErrorCode::config_error, "this command needs --point x,y");
  return {cfg.point[0], cfg.point[1]};
}

// Half-width of the analysis window for a revolution surface.
inline double analysis_extent(const RunConfig& cfg, const ProfileCurve& p) {
  if (cfg.extent) return *cfg.extent;
  return default_sample_window(p).second;
}

inline void emit(const RunConfig& cfg, const std::string& payload, std::ostream& out) {
  if (cfg.out) {
    std::ofstream file(*cfg.out, std::ios::binary);
    if (!file) throw Error(ErrorCode::config_error, "cannot write " + *cfg.out);
    file << payload;
  } else {
    out << payload;
  }
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  const SurfaceSpec surf = detail::require_surface(cfg);
  const ProfileCurve& profile = *surf.profile();
  const std::size_t n = cfg.resolution.value_or(64);
  const double extent = detail::analysis_extent(cfg, profile);
  const double cell = 2.0 * extent / static_cast<double>(n);

  json grid = json::array();
  std::ostringstream csv;
  csv << "x,y,grad_norm_sq,verdict\n";
  std::size_t convex_cells = 0;
  double max_convex_radius = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = -extent + (static_cast<double>(i) + 0.5) * cell;
      const double y = -extent + (static_cast<double>(j) + 0.5) * cell;
      std::string verdict;
      double g2 = numeric::infinity;
      try {
        g2 = norm_sq(surf.gradient(x, y));
        verdict = std::string(to_string(classify_gradient_norm(g2)));
      } catch (const Error& e) {
        verdict = e.code() == ErrorCode::apex_singularity ? "singular" : "outside";
      }
      if (verdict == "convex") {
        ++convex_cells;
        max_convex_radius = std::max(max_convex_radius, std::hypot(x, y));
      }
      const json value = std::isfinite(g2) ? json(g2) : json(nullptr);
      grid.push_back({{"x", x}, {"y", y}, {"grad_norm_sq", value}, {"verdict", verdict}});
      csv << io::format_double(x) << ',' << io::format_double(y) << ','
          << (std::isfinite(g2) ? io::format_double(g2) : std::string("nan")) << ',' << verdict << '\n';
    }
  }

  // (s, phi'(s)^2) against the 1/3 line.
  json prof = json::array();
  csv << "\ns,slope_sq,threshold\n";
  const RadialDomain& d = profile.domain();
  const double s_hi = d.bounded() ? std::min(d.hi, extent * std::sqrt(2.0)) : extent * std::sqrt(2.0);
  for (std::size_t k = 0; k <= n; ++k) {
    const double s = d.lo + (s_hi - d.lo) * static_cast<double>(k) / static_cast<double>(n);
    double c;
    try {
      c = cartesian_condition(profile, s);
    } catch (const Error&) {
      continue;
    }
    prof.push_back({{"s", s}, {"slope_sq", c}});
    csv << io::format_double(s) << ',' << io::format_double(c) << ',' << io::format_double(convexity_threshold) << '\n';
  }

  if (cfg.format.value_or("json") == "csv") {
    detail::emit(cfg, csv.str(), out);
  } else {
    json doc;
    doc["surface"] = io::to_json(profile);
    doc["extent"] = extent;
    doc["resolution"] = n;
    doc["threshold"] = convexity_threshold;
    doc["summary"] = {{"convex_cells", convex_cells}, {"max_convex_radius", max_convex_radius}, {"cell", cell}};
    doc["grid"] = grid;
    doc["profile"] = prof;
    detail::emit(cfg, detail::dump(doc), out);
  }
  return ok;
}

inline int cmd_domain(const RunConfig& cfg, std::ostream& out) {
  const SurfaceSpec surf = detail::require_surface(cfg);
  DomainOptions opts;
  opts.clip = cfg.clip;
  opts.threshold = cfg.threshold;
  const ConvexityDomain dom = convexity_domain(*surf.profile(), cfg.resolution.value_or(1024), opts);
  if (cfg.format.value_or("json") == "csv") {
    std::ostringstream csv;
    csv << "kind,a,b\n";
    for (const auto& i : dom.intervals) {
      csv << "interval," << io::format_double(i.lo) << ',' << io::format_double(i.hi) << '\n';
    }
    for (const auto& r : dom.boundary_roots) {
      csv << "root," << io::format_double(r.location) << ',' << io::format_double(r.residual) << '\n';
    }
    detail::emit(cfg, csv.str(), out);
  } else {
    json doc = io::to_json(dom);
    doc["surface"] = io::to_json(*surf.profile());
    detail::emit(cfg, detail::dump(doc), out);
  }
  return ok;
}

// The six builtin surfaces with the parameters used throughout the docs.
inline std::vector<SurfaceSpec> builtin_surfaces() {
  return {SurfaceSpec::revolution(ProfileCurve::paraboloid(100.0)),
          SurfaceSpec::revolution(ProfileCurve::cone(0.5)),
          SurfaceSpec::revolution(ProfileCurve::ellipsoid(1.0, 1.0)),
          SurfaceSpec::revolution(ProfileCurve::hyperboloid2(0.5, 1.0)),
          SurfaceSpec::revolution(ProfileCurve::hyperboloid1(0.5, 1.0)),
          SurfaceSpec::revolution(ProfileCurve::gaussian())};
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<SurfaceSpec> surfaces;
  if (cfg.surface) surfaces.push_back(detail::require_surface(cfg));
  else surfaces = builtin_surfaces();
  SampleSpec spec;
  spec.count = cfg.samples;
  spec.seed = cfg.seed;
  spec.band = cfg.band;
  spec.directions = cfg.directions;
  spec.threshold = cfg.threshold;
  json doc;
  doc["reports"] = json::array();
  std::size_t disagreements = 0;
  for (const SurfaceSpec& surf : surfaces) {
    const EquivalenceReport report = verify_equivalence(surf, spec);
    disagreements += report.disagreements.size();
    if (report.indeterminate > 0) {
      err << "warning: " << report.indeterminate << " indeterminate samples on " << report.surface << '\n';
    }
    doc["reports"].push_back(io::to_json(report));
  }
  doc["disagreements"] = disagreements;
  if (cfg.format.value_or("json") == "csv") {
    std::ostringstream csv;
    csv << "surface,samples,agreements,disagreements,indeterminate,worst_margin\n";
    for (const auto& r : doc["reports"]) {
      csv << r["surface"].get<std::string>() << ',' << r["samples"] << ',' << r["agreements"] << ','
          << r["disagreements"].size() << ',' << r["indeterminate"] << ','
          << (r["worst_margin"].is_null() ? std::string("nan") : io::format_double(r["worst_margin"].get<double>()))
          << '\n';
    }
    detail::emit(cfg, csv.str(), out);
  } else {
    detail::emit(cfg, detail::dump(doc), out);
  }
  return disagreements == 0 ? ok : disagreement;
}

inline int cmd_indicatrix(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SurfaceSpec surf = detail::require_surface(cfg);
  const Vec2 p = detail::require_point(cfg);
  const Indicatrix ind = indicatrix(surf, p.x, p.y, cfg.nav, cfg.n);
  if (ind.non_convex) {
    err << "warning: indicatrix at (" << p.x << ", " << p.y << ") is not convex\n";
    if (cfg.strict) return geometry_failure;
  }
  if (cfg.format.value_or("json") == "csv") {
    std::ostringstream csv;
    csv << "k,xdot,ydot\n";
    for (std::size_t k = 0; k < ind.samples.size(); ++k) {
      csv << k << ',' << io::format_double(ind.samples[k].x) << ',' << io::format_double(ind.samples[k].y) << '\n';
    }
    detail::emit(cfg, csv.str(), out);
  } else {
    json doc = io::to_json(ind);
    doc["surface"] = io::to_json(*surf.profile());
    doc["nav"] = {{"v", cfg.nav.v}, {"w", cfg.nav.w}};
    detail::emit(cfg, detail::dump(doc), out);
  }
  return ok;
}

inline int cmd_geodesic(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SurfaceSpec surf = detail::require_surface(cfg);
  const Vec2 start = detail::require_point(cfg);
  const Vec2 dir{cfg.direction[0], cfg.direction[1]};
  GeodesicPath path;
  try {
    path = geodesic_shoot(surf, start, dir, cfg.length, cfg.step, cfg.nav);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::left_convex_domain || cfg.strict) throw;
    err << "warning: " << e.what() << '\n';
    path.status = PathStatus::left_convex_domain;
  }
  if (path.status != PathStatus::complete) {
    err << "warning: geodesic stopped early (" << to_string(path.status) << ") at t = " << path.length() << '\n';
  }
  if (cfg.format.value_or("csv") == "json") {
    json doc = io::path_summary(path);
    doc["surface"] = io::to_json(*surf.profile());
    detail::emit(cfg, detail::dump(doc), out);
  } else {
    std::ostringstream csv;
    io::write_geodesic_csv(csv, path);
    detail::emit(cfg, csv.str(), out);
  }
  return (cfg.strict && path.status != PathStatus::complete) ? geometry_failure : ok;
}

inline int cmd_front(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SurfaceSpec surf = detail::require_surface(cfg);
  const Vec2 seed = detail::require_point(cfg);
  const Wavefront wf = wavefront(surf, seed, cfg.time, cfg.rays, cfg.step, cfg.nav, cfg.fronts);
  std::size_t truncated = 0;
  for (const auto& ray : wf.rays) truncated += ray.status != PathStatus::complete;
  if (truncated > 0) err << "warning: " << truncated << " rays stopped early\n";
  if (cfg.format.value_or("csv") == "json") {
    json doc = io::wavefront_summary(wf);
    doc["surface"] = io::to_json(*surf.profile());
    detail::emit(cfg, detail::dump(doc), out);
  } else {
    std::ostringstream csv;
    io::write_wavefront_csv(csv, wf);
    detail::emit(cfg, csv.str(), out);
  }
  return (cfg.strict && truncated > 0) ? geometry_failure : ok;
}

// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Slope-metric convexity analysis on graph surfaces and surfaces of revolution"};
  app.require_subcommand(1);

  std::optional<std::string> config_path, surface_arg, format_arg, out_arg;
  std::optional<std::size_t> resolution, rays, fronts, samples, directions, n;
  std::optional<std::uint64_t> seed;
  std::optional<double> band, length, step, time, extent, clip, threshold, v, w;
  std::vector<double> point, direction;
  bool strict = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--surface", surface_arg, "surface JSON: inline document or file path");
    sub->add_option("--out", out_arg, "output path (default stdout)");
    sub->add_option("--format", format_arg, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--resolution", resolution, "grid resolution (>= 64)");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--band", band, "exclusion band around convexity boundaries");
    sub->add_flag("--strict", strict, "treat early geodesic termination as an error");
    sub->add_option("--v", v, "flat-ground speed");
    sub->add_option("--w", w, "slope coefficient g/2");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "gradient-norm field and convexity verdict map");
  add_common(analyze);
  analyze->add_option("--extent", extent, "half-width of the analysis window");
  CLI::App* domain = app.add_subcommand("domain", "radial intervals of strong convexity");
  add_common(domain);
  domain->add_option("--clip", clip, "scan limit for unbounded domains");
  domain->add_option("--threshold", threshold, "criterion threshold (test hook)");
  CLI::App* verify = app.add_subcommand("verify", "cross-check the convexity criteria");
  add_common(verify);
  verify->add_option("--samples", samples, "sample points per surface");
  verify->add_option("--directions", directions, "oracle directions per point");
  verify->add_option("--threshold", threshold, "criterion threshold (test hook)");
  CLI::App* ind = app.add_subcommand("indicatrix", "sample the unit curve at a point");
  add_common(ind);
  ind->add_option("--point", point, "x,y")->delimiter(',')->expected(2);
  ind->add_option("--n", n, "number of samples");
  CLI::App* geo = app.add_subcommand("geodesic", "shoot a time-minimising geodesic");
  add_common(geo);
  geo->add_option("--point", point, "start x,y")->delimiter(',')->expected(2);
  geo->add_option("--direction", direction, "initial direction dx,dy")->delimiter(',')->expected(2);
  geo->add_option("--length", length, "travel time");
  geo->add_option("--step", step, "integration step");
  CLI::App* front = app.add_subcommand("front", "propagate a wavefront from a seed");
  add_common(front);
  front->add_option("--point", point, "seed x,y")->delimiter(',')->expected(2);
  front->add_option("--time", time, "total time");
  front->add_option("--rays", rays, "number of rays");
  front->add_option("--fronts", fronts, "number of front snapshots");
  front->add_option("--step", step, "integration step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return config_failure;
  }

  try {
    RunConfig cfg;
    if (config_path) detail::apply_config_file(cfg, io::load_document(*config_path));
    if (surface_arg) cfg.surface = io::load_document(*surface_arg);
    if (out_arg) cfg.out = out_arg;
    if (format_arg) cfg.format = format_arg;
    if (resolution) cfg.resolution = resolution;
    if (seed) cfg.seed = *seed;
    if (band) cfg.band = *band;
    if (strict) cfg.strict = true;
    if (v) cfg.nav.v = *v;
    if (w) cfg.nav.w = *w;
    if (extent) cfg.extent = extent;
    if (clip) cfg.clip = *clip;
    if (threshold) cfg.threshold = *threshold;
    if (samples) cfg.samples = *samples;
    if (directions) cfg.directions = *directions;
    if (n) cfg.n = *n;
    if (!point.empty()) cfg.point = point;
    if (!direction.empty()) cfg.direction = direction;
    if (length) cfg.length = *length;
    if (step) cfg.step = *step;
    if (time) cfg.time = *time;
    if (rays) cfg.rays = *rays;
    if (fronts) cfg.fronts = *fronts;
    cfg.validate();

    if (*analyze) return cmd_analyze(cfg, out);
    if (*domain) return cmd_domain(cfg, out);
    if (*verify) return cmd_verify(cfg, out, err);
    if (*ind) return cmd_indicatrix(cfg, out, err);
    if (*geo) return cmd_geodesic(cfg, out, err);
    if (*front) return cmd_front(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    const bool config = e.code() == ErrorCode::config_error || e.code() == ErrorCode::invalid_argument;
    return config ? config_failure : geometry_failure;
  }
  return config_failure;
}

}  // namespace slope::cli
