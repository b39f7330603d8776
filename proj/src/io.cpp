#include "degfem/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

namespace degfem {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string format_g17(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field(std::ostream& os, const NodalField& f) {
  os << f.values.size() << '\n';
  for (double v : f.values) os << format_shortest(v) << '\n';
}

NodalField read_field(std::istream& is) {
  long long n = -1;
  if (!(is >> n) || n < 0) throw std::runtime_error("field file: bad header");
  NodalField f;
  f.values.resize(static_cast<std::size_t>(n));
  std::string tok;
  for (double& v : f.values) {
    if (!(is >> tok)) throw std::runtime_error("field file: truncated");
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw std::runtime_error("field file: bad number '" + tok + "'");
    }
  }
  return f;
}

Json to_json(const Band& b) {
  Json j;
  j["odd_elements"] = b.odd_elements;
  j["even_elements"] = b.even_elements;
  Json edges = Json::array();
  for (const auto& e : b.gamma_edges) edges.push_back({e[0], e[1]});
  j["gamma_edges"] = edges;
  j["length"] = b.length;
  j["direction"] = {b.direction.x, b.direction.y};
  j["base_h"] = b.base_h;
  j["height"] = b.height;
  j["strip"] = b.strip;
  j["n"] = b.n();
  return j;
}

Band band_from_json(const Json& j) {
  Band b;
  b.odd_elements = j.at("odd_elements").get<std::vector<int>>();
  b.even_elements = j.at("even_elements").get<std::vector<int>>();
  for (const auto& e : j.at("gamma_edges")) b.gamma_edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  b.length = j.at("length").get<double>();
  b.direction = {j.at("direction").at(0).get<double>(), j.at("direction").at(1).get<double>()};
  b.base_h = j.value("base_h", 0.0);
  b.height = j.value("height", 0.0);
  b.strip = j.value("strip", -1);
  return b;
}

Json to_json(const BandCheck& c) {
  return {{"alternation_ok", c.alternation_ok},
          {"collinearity_error", c.collinearity_error},
          {"first_alternation_failure", c.first_alternation_failure}};
}

namespace {

Json violations_json(const std::vector<Violation>& vs) {
  Json arr = Json::array();
  for (const Violation& v : vs) {
    arr.push_back({{"condition", std::string(1, v.condition)}, {"detail", v.detail}, {"offenders", v.offenders}});
  }
  return arr;
}

}  // namespace

Json to_json(const CorrectionSpec& s) {
  Json j;
  Json bumps = Json::array();
  for (const Bump& b : s.bumps) {
    Json e{{"kind", b.kind == BumpKind::Phi ? "phi" : "psi"},
           {"center", {b.center.x, b.center.y}},
           {"radius", b.radius},
           {"owner", b.owner}};
    if (b.kind == BumpKind::Phi) {
      e["amplitude"] = b.amplitude;
    } else {
      e["plane"] = {{"value", b.plane(b.center)}, {"gradient", {b.plane.g.x, b.plane.g.y}}, {"anchor", {b.center.x, b.center.y}}};
    }
    bumps.push_back(e);
  }
  j["bumps"] = bumps;
  j["admissible"] = s.admissible;
  j["violations"] = violations_json(s.violations);
  j["mesh_size"] = s.mesh_size;
  j["sum_h2"] = s.sum_h2;
  j["h2_budget"] = s.h2_budget;
  j["min_support_gap"] = number(s.min_support_gap);
  j["min_vertex_clearance"] = number(s.min_vertex_clearance);
  j["max_cluster_ratio"] = s.max_cluster_ratio;
  j["min_cluster_separation"] = number(s.min_cluster_separation);
  j["cluster_constant"] = s.cluster_constant;
  return j;
}

Json to_json(const SufficientReport& r) {
  return {{"alpha0", r.alpha0},
          {"max_angle_t1", r.max_angle_t1},
          {"t1_count", r.t1_count},
          {"t2_count", r.t2_count},
          {"phi_bumps", r.phi_bumps},
          {"psi_bumps", r.psi_bumps},
          {"sum_h2", r.sum_h2},
          {"h2_budget", r.h2_budget},
          {"min_support_gap", number(r.min_support_gap)},
          {"min_vertex_clearance", number(r.min_vertex_clearance)},
          {"max_cluster_ratio", r.max_cluster_ratio},
          {"min_cluster_separation", number(r.min_cluster_separation)},
          {"violations", violations_json(r.violations)},
          {"clusters_without_t2", r.clusters_without_t2},
          {"verdict", r.verdict ? "pass" : "fail"}};
}

Json to_json(const NecessaryReport& r) {
  Json bands = Json::array();
  for (const BandNecessary& b : r.bands) {
    bands.push_back({{"n", b.n},
                     {"length", b.length},
                     {"base_h", b.base_h},
                     {"height", b.height},
                     {"min_inv_sin", b.min_inv_sin},
                     {"min_tilde_area", b.min_tilde_area},
                     {"value", b.value},
                     {"closed_form", b.closed_form},
                     {"area_ratio_min", number(b.area_ratio_min)},
                     {"area_ratio_max", b.area_ratio_max},
                     {"sin_ratio", b.sin_ratio},
                     {"length_threshold", b.length_threshold},
                     {"alternation_ok", b.alternation_ok}});
  }
  return {{"alpha", r.alpha},
          {"c_l", r.c_l},
          {"mesh_size", r.mesh_size},
          {"aggregate", r.aggregate},
          {"aggregate_closed", r.aggregate_closed},
          {"multi_closed_form", r.multi_closed_form},
          {"bands", bands}};
}

Json to_json(const BandTrace& t) {
  return {{"interval_lengths", t.interval_lengths},
          {"slopes", t.slopes},
          {"wprime", t.wprime},
          {"secant_slope", t.secant_slope},
          {"weighted_sum", t.weighted_sum},
          {"scale", t.scale},
          {"slope_jumps_sq", t.slope_jumps_sq},
          {"balanced", t.balanced}};
}

Json to_json(const BandErrorSplit& s) {
  return {{"a1", s.a1}, {"a2", s.a2}, {"h1_error_on_tilde", s.h1_error_on_tilde}};
}

Json to_json(const CeaReport& r) {
  return {{"error", r.error}, {"candidate_errors", r.candidate_errors}, {"holds", r.holds}};
}

Json to_json(const RateFit& f) {
  return {{"rate", number(f.rate)}, {"intercept", number(f.intercept)}, {"residual", number(f.residual)}};
}

Json to_json(const MeshClassification& c, bool with_indices) {
  Json j{{"alpha0", c.alpha0}, {"t1_count", c.t1.size()}, {"t2_count", c.t2.size()}};
  if (with_indices) j["t2"] = c.t2;
  return j;
}

}  // namespace degfem
