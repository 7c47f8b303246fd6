#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slope/convexity.hpp"
#include "slope/error.hpp"
#include "slope/geodesics.hpp"
#include "slope/profile.hpp"
#include "slope/surface.hpp"

namespace slope::io {

using json = nlohmann::json;

// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline double require_number(const json& params, const char* key, std::string_view kind) {
  if (!params.is_object() || !params.contains(key) || !params.at(key).is_number()) {
    throw Error(ErrorCode::config_error, std::string(kind) + " surface needs numeric params." + key);
  }
  return params.at(key).get<double>();
}

inline ProfileCurve parse_custom(const json& params) {
  std::vector<double> s, z;
  if (params.contains("table")) {
    for (const auto& row : params.at("table")) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
        throw Error(ErrorCode::config_error, "custom table rows must be [s, phi] number pairs");
      }
      s.push_back(row[0].get<double>());
      z.push_back(row[1].get<double>());
    }
  } else if (params.contains("s") && params.contains("phi")) {
    s = params.at("s").get<std::vector<double>>();
    z = params.at("phi").get<std::vector<double>>();
  } else {
    throw Error(ErrorCode::config_error, "custom surface needs params.table = [[s, phi], ...]");
  }
  try {
    return ProfileCurve::custom(std::move(s), std::move(z));
  } catch (const Error& e) {
    throw Error(ErrorCode::config_error, e.what());
  }
}

}  // namespace detail

// Surface document:
//   {"kind": "paraboloid|cone|ellipsoid|hyperboloid2|hyperboloid1|gaussian|custom",
//    "params": {...}, "domain": [s_min, s_max]}
// plus optional "derivative": "closed-form|central-difference" and "step".
inline ProfileCurve parse_profile(const json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc.at("kind").is_string()) {
    throw Error(ErrorCode::config_error, "surface document needs a string \"kind\"");
  }
  const std::string kind = doc.at("kind").get<std::string>();
  const json params = doc.value("params", json::object());
  ProfileCurve profile = [&] {
    try {
      if (kind == "paraboloid") return ProfileCurve::paraboloid(detail::require_number(params, "h", kind));
      if (kind == "cone") return ProfileCurve::cone(detail::require_number(params, "a", kind));
      if (kind == "ellipsoid") {
        return ProfileCurve::ellipsoid(detail::require_number(params, "a", kind),
                                       detail::require_number(params, "c", kind));
      }
      if (kind == "hyperboloid2") {
        return ProfileCurve::hyperboloid2(detail::require_number(params, "a", kind),
                                          detail::require_number(params, "b", kind));
      }
      if (kind == "hyperboloid1") {
        return ProfileCurve::hyperboloid1(detail::require_number(params, "a", kind),
                                          detail::require_number(params, "b", kind));
      }
      if (kind == "gaussian") return ProfileCurve::gaussian();
      if (kind == "custom") return detail::parse_custom(params);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::config_error) throw;
      throw Error(ErrorCode::config_error, e.what());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::config_error, e.what());
    }
    throw Error(ErrorCode::config_error, "unknown surface kind \"" + kind + "\"");
  }();

  if (doc.contains("derivative")) {
    const std::string mode = doc.at("derivative").get<std::string>();
    const double step = doc.value("step", ProfileCurve::default_fd_step);
    if (mode == "closed-form") profile = profile.with_derivative_mode(DerivativeMode::closed_form, step);
    else if (mode == "central-difference") profile = profile.with_derivative_mode(DerivativeMode::central_difference, step);
    else throw Error(ErrorCode::config_error, "derivative must be closed-form or central-difference");
  }
  if (doc.contains("domain")) {
    const json& dom = doc.at("domain");
    if (!dom.is_array() || dom.size() != 2 || !dom[0].is_number()) {
      throw Error(ErrorCode::config_error, "domain must be [s_min, s_max]");
    }
    const double lo = dom[0].get<double>();
    const double hi = dom[1].is_null() ? numeric::infinity : dom[1].get<double>();
    try {
      profile = profile.with_domain(std::max(lo, profile.domain().lo), std::min(hi, profile.domain().hi));
    } catch (const Error& e) {
      throw Error(ErrorCode::config_error, e.what());
    }
  }
  return profile;
}

inline SurfaceSpec parse_surface(const json& doc) {
  return SurfaceSpec::revolution(parse_profile(doc));
}

// Accepts inline JSON text or a path to a JSON file.
inline json load_document(const std::string& text_or_path) {
  std::string text = text_or_path;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') {
    std::ifstream in(text_or_path);
    if (!in) throw Error(ErrorCode::config_error, "cannot open " + text_or_path);
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::config_error, std::string("malformed JSON: ") + e.what());
  }
}

inline json to_json(const ProfileCurve& p) {
  json out{{"kind", std::string(p.name())}};
  json params = json::object();
  for (const auto& [k, v] : p.params()) params[k] = v;
  out["params"] = params;
  out["domain"] = {p.domain().lo, p.domain().bounded() ? json(p.domain().hi) : json(nullptr)};
  return out;
}

inline json to_json(const ConvexityDomain& d) {
  json out;
  out["variable"] = d.variable == ConvexityDomain::Variable::s ? "s" : "u";
  out["scan"] = {d.scan_lo, d.scan_hi};
  out["clipped"] = d.clipped;
  out["intervals"] = json::array();
  for (const auto& i : d.intervals) out["intervals"].push_back({i.lo, i.hi});
  out["boundary_roots"] = json::array();
  for (const auto& r : d.boundary_roots) {
    out["boundary_roots"].push_back({{"location", r.location}, {"residual", r.residual}});
  }
  out["asymptote"] = d.asymptote ? (std::isfinite(*d.asymptote) ? json(*d.asymptote) : json("inf")) : json(nullptr);
  out["covers_scan"] = d.covers_scan();
  out["warnings"] = d.warnings;
  return out;
}

inline json to_json(const EquivalenceReport& r) {
  const auto opt = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
  json out;
  out["surface"] = r.surface;
  out["samples"] = r.samples;
  out["band"] = r.band;
  out["agreements"] = r.agreements;
  out["indeterminate"] = r.indeterminate;
  out["trig_evaluated"] = r.trig_evaluated;
  out["disagreements"] = json::array();
  for (const auto& d : r.disagreements) {
    out["disagreements"].push_back({{"x", d.x},
                                    {"y", d.y},
                                    {"predicates",
                                     {{"analytic", opt(d.predicates.analytic)},
                                      {"cartesian", opt(d.predicates.cartesian)},
                                      {"trig", opt(d.predicates.trig)},
                                      {"oracle", opt(d.predicates.oracle)}}}});
  }
  out["worst_margin"] = std::isfinite(r.worst_margin) ? json(r.worst_margin) : json(nullptr);
  return out;
}

inline json to_json(const Indicatrix& ind) {
  json out;
  out["center"] = {ind.center.x, ind.center.y};
  out["frame"] = {{"e1", {ind.e1.x, ind.e1.y}}, {"e2", {ind.e2.x, ind.e2.y}}, {"degenerate", ind.frame_degenerate}};
  out["fit"] = {{"c0", ind.fit.c0}, {"c1", ind.fit.c1}, {"residual", ind.fit.residual}};
  out["non_convex"] = ind.non_convex;
  out["max_unit_residual"] = ind.max_unit_residual;
  out["samples"] = json::array();
  for (const Vec2& p : ind.samples) out["samples"].push_back({p.x, p.y});
  return out;
}

inline void write_path_rows(std::ostream& os, std::size_t ray_id, const GeodesicPath& path) {
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    os << ray_id << ',' << format_double(path.times[i]) << ',' << format_double(path.points[i].x) << ','
       << format_double(path.points[i].y) << ',' << format_double(path.F_values[i]) << '\n';
  }
}

inline constexpr const char* path_csv_header = "ray_id,t,x,y,F\n";

inline void write_geodesic_csv(std::ostream& os, const GeodesicPath& path) {
  os << path_csv_header;
  write_path_rows(os, 0, path);
}

inline json path_summary(const GeodesicPath& path, std::size_t ray_id = 0) {
  return {{"ray_id", ray_id},
          {"status", std::string(to_string(path.status))},
          {"length", path.length()},
          {"steps", path.points.empty() ? 0 : path.points.size() - 1},
          {"max_relative_drift", path.max_relative_drift()}};
}

// F along a ray at time t, linear between nodes.
inline double F_at(const GeodesicPath& path, double t) {
  const auto it = std::lower_bound(path.times.begin(), path.times.end(), t);
  if (it == path.times.end()) return path.F_values.back();
  const std::size_t i = static_cast<std::size_t>(std::distance(path.times.begin(), it));
  if (i == 0 || path.times[i] == t) return path.F_values[i];
  const double q = (t - path.times[i - 1]) / (path.times[i] - path.times[i - 1]);
  return (1.0 - q) * path.F_values[i - 1] + q * path.F_values[i];
}

inline void write_wavefront_csv(std::ostream& os, const Wavefront& wf) {
  os << path_csv_header;
  for (const Front& front : wf.fronts) {
    for (std::size_t i = 0; i < front.points.size(); ++i) {
      const std::size_t id = front.ray_ids[i];
      os << id << ',' << format_double(front.t) << ',' << format_double(front.points[i].x) << ','
         << format_double(front.points[i].y) << ',' << format_double(F_at(wf.rays[id], front.t)) << '\n';
    }
  }
}

inline json wavefront_summary(const Wavefront& wf) {
  json out;
  out["seed"] = {wf.seed.x, wf.seed.y};
  out["rays"] = json::array();
  std::size_t complete = 0;
  for (std::size_t k = 0; k < wf.rays.size(); ++k) {
    out["rays"].push_back(path_summary(wf.rays[k], k));
    if (wf.rays[k].status == PathStatus::complete) ++complete;
  }
  out["complete"] = complete;
  out["fronts"] = json::array();
  for (const Front& f : wf.fronts) {
    json pts = json::array();
    for (const Vec2& p : f.points) pts.push_back({p.x, p.y});
    out["fronts"].push_back({{"t", f.t}, {"ray_ids", f.ray_ids}, {"points", pts}});
  }
  return out;
}

}  // namespace slope::io
