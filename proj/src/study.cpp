#include "degfem/study.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace degfem {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int cluster_block_size(int n) { return std::max(1, static_cast<int>(std::lround(std::sqrt(n) / 2.0))); }

// Everything the per-family code hands back to the common solve/measure path.
struct Level {
  Triangulation mesh;
  double hbar = kNaN;
  int ny = 0;
  std::vector<int> band_elements;
  std::vector<std::array<int, 2>> gamma;
  std::vector<Band> bands;
  std::vector<Cluster> clusters;
  bool correct = false;
  Json extra = Json::object();
};

Level build_level(const StudyConfig& cfg, int nx) {
  const double h = 1.0 / nx;
  const double beta = cfg.effective_beta();
  Level lv;
  switch (cfg.family) {
    case Family::Uniform: {
      lv.mesh = unit_square_uniform(nx);
      lv.gamma = horizontal_edges(lv.mesh, static_cast<double>(nx / 2) / nx);
      break;
    }
    case Family::BabuskaAziz: {
      lv.ny = std::max(1, static_cast<int>(std::lround(std::pow(static_cast<double>(nx), beta))));
      RowMesh rm = babuska_aziz(nx, lv.ny);
      lv.mesh = std::move(rm.mesh);
      lv.hbar = 1.0 / lv.ny;
      lv.bands = std::move(rm.bands);
      for (const Band& b : lv.bands) lv.band_elements.insert(lv.band_elements.end(), b.even_elements.begin(), b.even_elements.end());
      if (!lv.bands.empty()) lv.gamma = lv.bands[lv.bands.size() / 2].gamma_edges;
      break;
    }
    case Family::SingleBand: {
      lv.hbar = std::pow(h, beta);
      SingleBandMesh sb = single_band_mesh(nx, lv.hbar);
      lv.mesh = std::move(sb.mesh);
      lv.bands = {sb.band};
      lv.band_elements = sb.band.even_elements;
      lv.gamma = sb.band.gamma_edges;
      lv.correct = true;  // reported, expected inadmissible
      lv.extra["band_check"] = to_json(check_band(lv.mesh, sb.band));
      lv.extra["max_angle_outside"] = sb.max_angle_outside;
      break;
    }
    case Family::SubdividedBand: {
      lv.hbar = std::pow(h, beta);
      SubdividedBandMesh sb = subdivided_band_mesh(nx, lv.hbar);
      lv.mesh = std::move(sb.mesh);
      lv.band_elements = sb.tilde_elements;
      lv.gamma = sb.gamma_edges;
      lv.correct = true;
      lv.extra["split_sources"] = sb.split_sources;
      break;
    }
    case Family::Cluster: {
      const int k = cluster_block_size(nx);
      const int ij = (nx - k) / 2;
      lv.ny = std::max(1, static_cast<int>(std::lround(k * std::pow(static_cast<double>(nx), beta - 1.0))));
      ClusterMesh cm = cluster_mesh(nx, {ij, ij, k}, lv.ny);
      lv.mesh = std::move(cm.mesh);
      lv.hbar = static_cast<double>(k) / (static_cast<double>(nx) * lv.ny);
      lv.band_elements = cm.cluster;
      lv.clusters = {Cluster{cm.cluster}};
      lv.gamma = horizontal_edges(lv.mesh, static_cast<double>(ij) / nx);
      lv.correct = true;
      lv.extra["cluster"] = {{"i", ij}, {"j", ij}, {"k", k}, {"rows_in_block", lv.ny},
                             {"elements", cm.cluster.size()}, {"diameter", cm.diameter},
                             {"block_diameter", cm.block_diameter}};
      break;
    }
  }
  return lv;
}

}  // namespace

Family parse_family(const std::string& name) {
  if (name == "uniform") return Family::Uniform;
  if (name == "single_band" || name == "band") return Family::SingleBand;
  if (name == "babuska_aziz" || name == "ba") return Family::BabuskaAziz;
  if (name == "subdivided_band" || name == "subdivided") return Family::SubdividedBand;
  if (name == "cluster") return Family::Cluster;
  throw InvalidConfiguration("unknown family '" + name + "'");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Uniform: return "uniform";
    case Family::SingleBand: return "single_band";
    case Family::BabuskaAziz: return "babuska_aziz";
    case Family::SubdividedBand: return "subdivided_band";
    case Family::Cluster: return "cluster";
  }
  return "?";
}

double StudyConfig::effective_beta() const {
  if (beta) return *beta;
  return family == Family::BabuskaAziz ? 2.0 : 3.0;
}

double StudyConfig::effective_alpha0() const { return alpha0 > 0.0 ? alpha0 : 0.9 * std::numbers::pi; }

void StudyConfig::validate() const {
  if (levels.empty()) throw InvalidConfiguration("study needs at least one level");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw InvalidConfiguration("levels must be positive");
    if (i > 0 && levels[i] <= levels[i - 1]) throw InvalidConfiguration("h sequence must be strictly decreasing");
  }
  if (!(effective_beta() >= 1.0)) throw InvalidConfiguration("beta must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidConfiguration("alpha must lie in [0, 1]");
  named_solution(solution);  // throws on an unknown name
}

std::vector<int> default_levels(Family f) {
  switch (f) {
    case Family::BabuskaAziz:
    case Family::Cluster: return {8, 16, 32};
    default: return {8, 16, 32, 64};
  }
}

std::vector<std::array<int, 2>> horizontal_edges(const Triangulation& tri, double y) {
  const double tol = 1e-12;
  std::vector<std::array<int, 2>> out;
  for (const Edge& e : tri.edges()) {
    const Point2 p = tri.vertex(e.key.lo), q = tri.vertex(e.key.hi);
    if (std::abs(p.y - y) <= tol && std::abs(q.y - y) <= tol) {
      out.push_back(p.x <= q.x ? std::array<int, 2>{e.key.lo, e.key.hi} : std::array<int, 2>{e.key.hi, e.key.lo});
    }
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return tri.vertex(a[0]).x < tri.vertex(b[0]).x; });
  return out;
}

StudyResult run_study(const StudyConfig& config, const SolveOptions& solve_options) {
  config.validate();
  const ManufacturedSolution u = named_solution(config.solution);
  StudyResult res;
  res.config = config;
  std::vector<double> hs, es, corrected;
  bool all_corrected = true;

  for (int nx : config.levels) {
    Level lv = build_level(config, nx);
    const Triangulation& tri = lv.mesh;
    StudyRow row;
    row.nx = nx;
    row.ny = lv.ny;
    row.h = 1.0 / nx;
    row.hbar = lv.hbar;
    row.elements = tri.num_triangles();

    const LinearSystem sys = assemble(tri, u);
    row.dofs = sys.vertex_of_dof.size();
    const SolveResult sol = solve(sys, solve_options);
    const NodalField& U = sol.field;
    row.residual = sol.relative_residual;
    row.method = sol.method;
    row.h1_error = h1_error(u, U, tri);
    row.interp_error = h1_error(u, lagrange(u, tri), tri);
    row.h1_error_band = lv.band_elements.empty() ? kNaN : h1_error(u, U, tri, lv.band_elements);
    row.l2_gamma = lv.gamma.empty() ? kNaN : l2_boundary_error(u, U, tri, lv.gamma);
    row.a1 = row.a2 = row.nec_lhs = kNaN;
    row.corrected_error = kNaN;
    row.extra = std::move(lv.extra);
    row.extra["mesh_size"] = tri.mesh_size();

    if (!lv.bands.empty()) {
      const BandErrorSplit split = band_split(u, U, lv.bands, tri);
      row.a1 = split.a1;
      row.a2 = split.a2;
      row.extra["band_split"] = to_json(split);
      const NecessaryReport nec = necessary_lhs(lv.bands, tri, config.alpha, config.c_l);
      row.nec_lhs = lv.bands.size() == 1 ? nec.bands.front().value : nec.aggregate;
      Json nj = to_json(nec);
      if (lv.bands.size() > 1) nj.erase("bands");  // one entry per row of the mesh is too bulky
      row.extra["necessary"] = nj;
      if (lv.bands.size() == 1) {
        const BandTrace tr = band_trace(tri, U, lv.bands.front());
        row.extra["trace"] = {{"weighted_sum", tr.weighted_sum}, {"scale", tr.scale},
                              {"slope_jumps_sq", tr.slope_jumps_sq}, {"balanced", tr.balanced}};
      }
    }

    if (lv.correct) {
      const MeshClassification cls = classify(tri, config.effective_alpha0());
      const CorrectionSpec spec = build_correction(u, tri, cls, lv.clusters, config.correction);
      const SufficientReport rep = sufficient_check(tri, cls, spec, lv.clusters);
      row.extra["sufficient"] = to_json(rep);
      if (spec.admissible) {
        const NodalField corr = corrected_interpolant(u, tri, spec);
        row.corrected_error = h1_error(u, corr, tri);
        try {
          row.extra["cea"] = to_json(cea_check(u, tri, U, {corr}));
        } catch (const BoundaryMismatch& e) {
          row.extra["cea"] = {{"skipped", std::string("correction reaches the boundary: ") + e.what()}};
        }
      }
    }
    if (!std::isfinite(row.corrected_error)) all_corrected = false;

    row.rate_running = res.rows.empty()
                           ? kNaN
                           : std::log(row.h1_error / res.rows.back().h1_error) / std::log(row.h / res.rows.back().h);
    hs.push_back(row.h);
    es.push_back(row.h1_error);
    corrected.push_back(row.corrected_error);
    res.rows.push_back(std::move(row));
  }

  if (hs.size() >= 2) {
    res.fit = fit_rate(hs, es);
    if (all_corrected) res.corrected_fit = fit_rate(hs, corrected);
  } else {
    res.fit = {kNaN, kNaN, kNaN};
  }
  return res;
}

std::string study_csv(const StudyResult& r) {
  std::ostringstream os;
  os << "h,hbar,dofs,h1_error,h1_error_band,l2_gamma,a1,a2,nec_lhs,rate_running\n";
  for (const StudyRow& row : r.rows) {
    os << format_g17(row.h) << ',' << format_g17(row.hbar) << ',' << row.dofs << ',' << format_g17(row.h1_error)
       << ',' << format_g17(row.h1_error_band) << ',' << format_g17(row.l2_gamma) << ',' << format_g17(row.a1)
       << ',' << format_g17(row.a2) << ',' << format_g17(row.nec_lhs) << ',' << format_g17(row.rate_running) << '\n';
  }
  return os.str();
}

Json study_json(const StudyResult& r) {
  const StudyConfig& c = r.config;
  Json j;
  j["config"] = {{"family", family_name(c.family)}, {"levels", c.levels}, {"beta", c.effective_beta()},
                 {"alpha", c.alpha}, {"c_l", c.c_l}, {"alpha0", c.effective_alpha0()}, {"solution", c.solution}};
  j["fit"] = to_json(r.fit);
  j["corrected_fit"] = r.corrected_fit ? to_json(*r.corrected_fit) : Json(nullptr);
  Json rows = Json::array();
  for (const StudyRow& row : r.rows) {
    Json e{{"nx", row.nx},
           {"h", row.h},
           {"hbar", number(row.hbar)},
           {"dofs", row.dofs},
           {"elements", row.elements},
           {"h1_error", row.h1_error},
           {"h1_error_band", number(row.h1_error_band)},
           {"l2_gamma", number(row.l2_gamma)},
           {"a1", number(row.a1)},
           {"a2", number(row.a2)},
           {"nec_lhs", number(row.nec_lhs)},
           {"rate_running", number(row.rate_running)},
           {"interp_error", row.interp_error},
           {"corrected_error", number(row.corrected_error)},
           {"relative_residual", row.residual},
           {"method", row.method}};
    if (row.ny > 0) e["ny"] = row.ny;
    for (auto it = row.extra.begin(); it != row.extra.end(); ++it) e[it.key()] = it.value();
    rows.push_back(e);
  }
  j["levels"] = rows;
  return j;
}

}  // namespace degfem
