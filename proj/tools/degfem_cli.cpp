// Command-line front end: gen, solve, study, verify, report.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "degfem/study.hpp"
#include "degfem/verify.hpp"

using namespace degfem;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kSolver = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot write " + path);
  os << text;
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Triangulation load_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read " + path);
  return read_mesh(is);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text(out, text);
  }
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string family;
  int n = 8, nx = 8, ny = 0, rows = 8;
  double hbar = 0.0;
  std::vector<int> block;
  std::string out = "mesh.txt";
};

int cmd_gen(const GenArgs& a) {
  Triangulation mesh;
  Json side;
  side["family"] = a.family;
  if (a.family == "uniform") {
    mesh = unit_square_uniform(a.n);
    side["n"] = a.n;
  } else if (a.family == "ba" || a.family == "babuska_aziz") {
    if (a.ny < 1) throw InvalidParameters("gen ba needs --ny >= 1");
    RowMesh rm = babuska_aziz(a.nx, a.ny);
    mesh = std::move(rm.mesh);
    side["nx"] = a.nx;
    side["ny"] = a.ny;
    Json bands = Json::array();
    for (const Band& b : rm.bands) bands.push_back(to_json(b));
    side["bands"] = bands;
    side["cutoff_elements"] = rm.cutoff_elements;
  } else if (a.family == "band" || a.family == "single_band" || a.family == "subdivided" ||
             a.family == "subdivided_band") {
    if (!(a.hbar > 0.0)) throw InvalidParameters("gen " + a.family + " needs --hbar > 0");
    side["nx"] = a.nx;
    side["hbar"] = a.hbar;
    if (a.family == "band" || a.family == "single_band") {
      SingleBandMesh sb = single_band_mesh(a.nx, a.hbar);
      mesh = std::move(sb.mesh);
      side["bands"] = Json::array({to_json(sb.band)});
      side["band_strip"] = sb.band_strip;
      side["strip_elements"] = sb.strip_elements;
      side["max_angle_outside"] = sb.max_angle_outside;
    } else {
      SubdividedBandMesh sb = subdivided_band_mesh(a.nx, a.hbar);
      mesh = std::move(sb.mesh);
      side["tilde_elements"] = sb.tilde_elements;
      side["split_elements"] = sb.split_elements;
      Json edges = Json::array();
      for (const auto& e : sb.gamma_edges) edges.push_back({e[0], e[1]});
      side["gamma_edges"] = edges;
      side["source_count"] = sb.source_count;
      side["split_sources"] = sb.split_sources;
    }
  } else if (a.family == "cluster") {
    if (a.block.size() != 3) throw InvalidParameters("gen cluster needs --block i,j,k");
    ClusterMesh cm = cluster_mesh(a.n, {a.block[0], a.block[1], a.block[2]}, a.rows);
    mesh = std::move(cm.mesh);
    side["n"] = a.n;
    side["block"] = {{"i", cm.block.i}, {"j", cm.block.j}, {"k", cm.block.k}};
    side["rows_in_block"] = cm.rows_in_block;
    side["clusters"] = Json::array({{{"elements", cm.cluster}, {"diameter", cm.diameter},
                                      {"block_diameter", cm.block_diameter}}});
  } else {
    throw UsageError("unknown generator '" + a.family + "'");
  }
  side["vertices"] = mesh.num_vertices();
  side["triangles"] = mesh.num_triangles();
  side["mesh_size"] = mesh.mesh_size();

  std::ostringstream ms;
  write_mesh(ms, mesh);
  write_text(a.out, ms.str());
  write_text(a.out + ".json", side.dump(2) + "\n");
  std::cout << mesh.num_triangles() << " triangles written to " << a.out << "\n";
  return kOk;
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string mesh, solution = "paraboloid", out;
  bool iterative = false;
  long max_iterations = 1000000;
};

int cmd_solve(const SolveArgs& a) {
  const Triangulation tri = load_mesh(a.mesh);
  const ManufacturedSolution u = named_solution(a.solution);
  SolveOptions opts;
  opts.force_iterative = a.iterative;
  opts.max_cg_iterations = a.max_iterations;
  const LinearSystem sys = assemble(tri, u);
  const SolveResult r = solve(sys, opts);
  if (!a.out.empty()) {
    std::ostringstream fs;
    write_field(fs, r.field);
    write_text(a.out, fs.str());
  }
  const Json j{{"solution", u.name},
               {"vertices", tri.num_vertices()},
               {"triangles", tri.num_triangles()},
               {"dofs", sys.vertex_of_dof.size()},
               {"mesh_size", tri.mesh_size()},
               {"h1_error", h1_error(u, r.field, tri)},
               {"relative_residual", r.relative_residual},
               {"method", r.method},
               {"refinements", r.refinements},
               {"iterations", r.iterations}};
  std::cout << j.dump(2) << "\n";
  return kOk;
}

// ---- study -----------------------------------------------------------------

struct StudyArgs {
  std::string family, format = "csv", out, solution = "paraboloid";
  std::vector<int> levels;
  double beta = 0.0, alpha = 1.0, alpha0 = 0.0, c_l = 1.0, h2_budget = -1.0, cluster_constant = 2.0;
  std::uint64_t seed = kDefaultSeed;
};

int cmd_study(const StudyArgs& a) {
  StudyConfig cfg;
  cfg.family = parse_family(a.family);
  cfg.levels = a.levels.empty() ? default_levels(cfg.family) : a.levels;
  if (a.beta != 0.0) cfg.beta = a.beta;
  cfg.alpha = a.alpha;
  cfg.alpha0 = a.alpha0;
  cfg.c_l = a.c_l;
  cfg.solution = a.solution;
  cfg.correction.h2_budget = a.h2_budget;
  cfg.correction.cluster_constant = a.cluster_constant;
  const StudyResult r = run_study(cfg);
  Json summary = study_json(r);
  summary["config"]["seed"] = a.seed;
  if (a.format == "json") {
    emit(a.out, summary.dump(2) + "\n");
  } else {
    emit(a.out, study_csv(r));
    if (!a.out.empty() && a.out != "-") write_text(a.out + ".json", summary.dump(2) + "\n");
  }
  std::fprintf(stderr, "fitted rate %.4f (residual %.2e)\n", r.fit.rate, r.fit.residual);
  return kOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string suite, format = "text", out;
  std::uint64_t seed = kDefaultSeed;
};

int cmd_verify(const VerifyArgs& a) {
  std::vector<std::string> suites = a.suite == "all" ? suite_names() : std::vector<std::string>{a.suite};
  bool ok = true;
  Json all = Json::array();
  std::ostringstream text;
  for (const std::string& s : suites) {
    const SuiteReport rep = run_suite(s, a.seed);
    ok = ok && rep.passed();
    all.push_back(to_json(rep));
    for (const CheckResult& c : rep.checks) {
      char line[256];
      std::snprintf(line, sizeof line, "%s %s.%s trials=%zu failures=%zu worst=%.3g\n", c.passed() ? "PASS" : "FAIL",
                    s.c_str(), c.name.c_str(), c.trials, c.failures, c.worst);
      text << line;
    }
  }
  emit(a.out, a.format == "json" ? all.dump(2) + "\n" : text.str());
  return ok ? kOk : kVerifyFailed;
}

// ---- report ----------------------------------------------------------------

struct ReportArgs {
  std::string mesh, sidecar, field, solution = "paraboloid", out;
  double alpha = 1.0, alpha0 = 0.0, c_l = 1.0, h2_budget = -1.0, cluster_constant = 2.0;
};

int cmd_report(const ReportArgs& a) {
  const Triangulation tri = load_mesh(a.mesh);
  const ManufacturedSolution u = named_solution(a.solution);
  std::string side_path = a.sidecar;
  if (side_path.empty() && std::filesystem::exists(a.mesh + ".json")) side_path = a.mesh + ".json";
  Json side = side_path.empty() ? Json::object() : Json::parse(read_text(side_path));

  std::vector<Band> bands;
  if (side.contains("bands")) {
    for (const Json& b : side["bands"]) bands.push_back(band_from_json(b));
  }
  std::vector<Cluster> clusters;
  if (side.contains("clusters")) {
    for (const Json& c : side["clusters"]) clusters.push_back(Cluster{c.at("elements").get<std::vector<int>>()});
  }

  const double alpha0 = a.alpha0 > 0.0 ? a.alpha0 : 0.9 * std::numbers::pi;
  const MeshClassification cls = classify(tri, alpha0);
  CorrectionOptions copt;
  copt.h2_budget = a.h2_budget;
  copt.cluster_constant = a.cluster_constant;
  const CorrectionSpec spec = build_correction(u, tri, cls, clusters, copt);

  Json j;
  j["mesh"] = {{"vertices", tri.num_vertices()}, {"triangles", tri.num_triangles()},
               {"mesh_size", tri.mesh_size()}, {"boundary_edges", tri.num_boundary_edges()}};
  j["classification"] = to_json(cls);
  j["correction"] = to_json(spec);
  j["sufficient"] = to_json(sufficient_check(tri, cls, spec, clusters));
  if (!bands.empty()) {
    Json checks = Json::array();
    for (const Band& b : bands) checks.push_back(to_json(check_band(tri, b)));
    j["band_checks"] = checks;
    j["necessary"] = to_json(necessary_lhs(bands, tri, a.alpha, a.c_l));
  }
  if (!clusters.empty()) {
    Json topo = Json::array();
    for (const Cluster& c : clusters) {
      const ClusterTopology t = cluster_topology(tri, c.elements);
      topo.push_back({{"edge_connected", t.edge_connected}, {"boundary_loops", t.boundary_loops},
                      {"euler_characteristic", t.euler_characteristic}, {"simply_connected", t.simply_connected()},
                      {"diameter", element_set_diameter(tri, c.elements)}});
    }
    j["clusters"] = topo;
  }
  if (!a.field.empty()) {
    std::ifstream fs(a.field);
    if (!fs) throw UsageError("cannot read " + a.field);
    const NodalField U = read_field(fs);
    if (U.values.size() != tri.num_vertices()) throw UsageError("field length does not match the mesh");
    j["h1_error"] = h1_error(u, U, tri);
    if (!bands.empty()) {
      j["band_split"] = to_json(band_split(u, U, bands, tri));
      if (bands.size() == 1) j["trace"] = to_json(band_trace(tri, U, bands.front()));
    }
  }
  emit(a.out, j.dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite element experiments on meshes with degenerating triangles"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a mesh and its JSON sidecar");
  g->add_option("family", gen.family, "uniform | ba | band | subdivided | cluster")->required();
  g->add_option("--n", gen.n, "Grid cells per side (uniform, cluster)");
  g->add_option("--nx", gen.nx, "Cells along x (ba, band, subdivided)");
  g->add_option("--ny", gen.ny, "Rows (ba)");
  g->add_option("--hbar", gen.hbar, "Thin strip height (band, subdivided)");
  g->add_option("--block", gen.block, "Cluster block i,j,k")->delimiter(',');
  g->add_option("--rows", gen.rows, "Rows inside the cluster block");
  g->add_option("--out", gen.out, "Mesh path; the sidecar gets a .json suffix");

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Solve the Poisson problem for a manufactured solution");
  s->add_option("--mesh", sol.mesh, "Mesh file")->required();
  s->add_option("--solution", sol.solution, "paraboloid | quadratic | sine | linear");
  s->add_option("--out", sol.out, "Write the nodal field here");
  s->add_flag("--iterative", sol.iterative, "Use preconditioned CG instead of LDLT");
  s->add_option("--max-iterations", sol.max_iterations, "CG iteration cap")->check(CLI::PositiveNumber);

  StudyArgs st;
  auto* y = app.add_subcommand("study", "Convergence study over a mesh family");
  y->add_option("family", st.family, "uniform | single_band | babuska_aziz | subdivided_band | cluster")->required();
  y->add_option("--levels", st.levels, "nx per level, comma separated")->delimiter(',');
  y->add_option("--beta", st.beta, "hbar = h^beta");
  y->add_option("--alpha", st.alpha, "Target order for the necessary condition");
  y->add_option("--alpha0", st.alpha0, "T1/T2 angle threshold in radians (default 0.9 pi)");
  y->add_option("--c-l", st.c_l, "Constant in the band length threshold");
  y->add_option("--h2-budget", st.h2_budget, "Budget for the sum of h_K^2 over T2");
  y->add_option("--cluster-constant", st.cluster_constant, "c in r_C <= c h^(1/2)");
  y->add_option("--solution", st.solution, "Manufactured solution");
  y->add_option("--seed", st.seed, "Recorded in the summary");
  y->add_option("--format", st.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  y->add_option("--out", st.out, "Output path (csv also writes <out>.json)");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Run an invariant suite");
  v->add_option("suite", ver.suite, "identities | interp | correction | necessary | all")
      ->required()
      ->check(CLI::IsMember({"identities", "interp", "correction", "necessary", "all"}));
  v->add_option("--seed", ver.seed, "Random seed");
  v->add_option("--format", ver.format, "text | json")->check(CLI::IsMember({"text", "json"}));
  v->add_option("--out", ver.out, "Output path");

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "Classification, correction and band report for a mesh");
  r->add_option("--mesh", rep.mesh, "Mesh file")->required();
  r->add_option("--sidecar", rep.sidecar, "JSON sidecar (default <mesh>.json if present)");
  r->add_option("--field", rep.field, "Nodal field for trace and split reports");
  r->add_option("--solution", rep.solution, "Manufactured solution");
  r->add_option("--alpha", rep.alpha, "Target order for the necessary condition");
  r->add_option("--alpha0", rep.alpha0, "T1/T2 angle threshold in radians (default 0.9 pi)");
  r->add_option("--c-l", rep.c_l, "Constant in the band length threshold");
  r->add_option("--h2-budget", rep.h2_budget, "Budget for the sum of h_K^2 over T2");
  r->add_option("--cluster-constant", rep.cluster_constant, "c in r_C <= c h^(1/2)");
  r->add_option("--out", rep.out, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (s->parsed()) return cmd_solve(sol);
    if (y->parsed()) return cmd_study(st);
    if (v->parsed()) return cmd_verify(ver);
    if (r->parsed()) return cmd_report(rep);
  } catch (const SolverBreakdown& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const MeshError& e) {
    std::cerr << "invalid mesh: " << e.what() << "\n";
    return kUsage;
  } catch (const Json::exception& e) {
    std::cerr << "bad sidecar: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
