#include "degfem/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "degfem/analysis.hpp"
#include "degfem/fem.hpp"

namespace degfem {

namespace {

using Rng = std::mt19937_64;
constexpr double kPi = std::numbers::pi;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

void record(CheckResult& c, double defect) {
  ++c.trials;
  if (!(defect <= 1.0)) ++c.failures;
  if (std::isnan(defect) || defect > c.worst) c.worst = defect;
}

Point2 rotate(Vec2 v, double t) { return {std::cos(t) * v.x - std::sin(t) * v.y, std::sin(t) * v.x + std::cos(t) * v.y}; }

// Triangle with maximum angle `alpha` at A, base BC of length `scale`, rigidly moved at random.
std::array<Point2, 3> random_obtuse(Rng& rng, double alpha, double scale) {
  const double beta = uniform(rng, 0.05, 0.95) * (kPi - alpha);
  const double gamma = kPi - alpha - beta;
  const double ab = scale * std::sin(gamma) / std::sin(alpha);
  const Vec2 a{ab * std::cos(beta), ab * std::sin(beta)};
  const double t = uniform(rng, 0.0, 2.0 * kPi);
  const Vec2 shift{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
  return {shift + rotate(a, t), shift + rotate({0.0, 0.0}, t), shift + rotate({scale, 0.0}, t)};
}

SuiteReport identities(std::uint64_t seed) {
  Rng rng(seed);
  SuiteReport rep{"identities", seed, {}};

  CheckResult id{"three_element_identity"};
  for (int trial = 0; trial < 1000; ++trial) {
    // The last few trials push the angle at B to within 1e-6 of pi.
    const double alpha = trial < 990 ? uniform(rng, 0.05, kPi - 1e-6) : kPi - 1e-6 * (1.0 + trial % 10 * 1e-3);
    const double t = uniform(rng, 0.0, 2.0 * kPi);
    const Point2 b{uniform(rng, -1, 1), uniform(rng, -1, 1)};
    const Triplet tr{b + uniform(rng, 0.1, 1.0) * rotate({1.0, 0.0}, t), b,
                     b + uniform(rng, 0.1, 1.0) * rotate({std::cos(alpha), std::sin(alpha)}, t)};
    Affine u0{uniform(rng, -1, 1), {uniform(rng, -3, 3), uniform(rng, -3, 3)}};
    Affine u1{0.0, {uniform(rng, -3, 3), uniform(rng, -3, 3)}};
    u1.c = u0(b) - dot(u1.g, b);
    const IdentityResult r = three_element_identity_check(tr, u0, u1);
    const double scale = static_cast<double>(std::max({r.lhs, r.rhs, 1.0L}));
    record(id, static_cast<double>(std::abs(r.lhs - r.rhs)) / (1e-10 * scale));
  }
  rep.checks.push_back(id);

  CheckResult diff{"difference_inequality"};
  for (int trial = 0; trial < 100000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    std::vector<double> h(static_cast<std::size_t>(n) + 1), a(h.size());
    for (auto& v : h) v = uniform(rng, 1e-3, 1.0);
    for (auto& v : a) v = uniform(rng, -10, 10);
    const DifferenceBound d = difference_bound_oracle(h, a);
    record(diff, d.holds ? 0.0 : 2.0);
  }
  rep.checks.push_back(diff);

  CheckResult proj{"proj_p1_exact"};
  // ||t^2 - P1 t^2||_{L2(0,L)} = L^{5/2} / (6 sqrt 5), scaled by |c|.
  for (auto [len, c] : std::vector<std::pair<double, double>>{{1, 1}, {2, 1}, {1, -3}, {0.5, 2}, {1, 0}}) {
    const double expect = std::abs(c) * std::pow(len, 2.5) / (6.0 * std::sqrt(5.0));
    record(proj, std::abs(proj_p1_residual(len, c) - expect) / (1e-12 * std::max(1.0, expect)));
  }
  rep.checks.push_back(proj);
  return rep;
}

SuiteReport interp(std::uint64_t seed) {
  Rng rng(seed);
  SuiteReport rep{"interp", seed, {}};
  CheckResult delta{"delta_bound"}, h1{"h1_bound"}, exact_bc{"exact_at_b_c"};
  const ManufacturedSolution para = paraboloid();
  for (int trial = 0; trial < 1000; ++trial) {
    const double alpha = uniform(rng, 0.9 * kPi, 0.9999 * kPi);
    const auto p = random_obtuse(rng, alpha, uniform(rng, 1e-3, 1.0));
    const ManufacturedSolution& u = para;
    const TriangleGeom g = tri_metrics(p[0], p[1], p[2]);
    const ModifiedInterp m = modified_element_interp(u, g);
    const Point2 xk = m.frame.foot;
    const double bound_delta =
        (distance(xk, g.b()) * distance(xk, g.c()) + std::pow(distance(xk, g.a()), 2)) * u.seminorm_2inf;
    record(delta, std::abs(m.delta) / (bound_delta * (1.0 + 1e-12) + 1e-300));
    const double err = std::sqrt(element_error_sq(u, g, m.v.g, QuadDegree::Two));
    const double bound_h1 = std::sqrt(13.0) * g.diameter * u.seminorm_2inf * std::sqrt(g.area);
    record(h1, err / bound_h1);
    const double s = 1e-13 * (1.0 + std::abs(u.u(g.b())) + std::abs(u.u(g.c())));
    record(exact_bc, std::max(std::abs(m.v(g.b()) - u.u(g.b())), std::abs(m.v(g.c()) - u.u(g.c()))) / s);
  }
  rep.checks.push_back(delta);
  rep.checks.push_back(h1);
  rep.checks.push_back(exact_bc);

  CheckResult grads{"solution_gradients"};
  for (const char* name : {"paraboloid", "quadratic", "sine", "linear"}) {
    const ManufacturedSolution u = named_solution(name);
    for (int trial = 0; trial < 200; ++trial) {
      const Point2 x{uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95)};
      const double e = 1e-5;
      const Vec2 fd{(u.u(x + Vec2{e, 0}) - u.u(x - Vec2{e, 0})) / (2 * e), (u.u(x + Vec2{0, e}) - u.u(x - Vec2{0, e})) / (2 * e)};
      record(grads, norm(fd - u.grad(x)) / (1e-7 * (1.0 + norm(u.grad(x)))));
    }
  }
  rep.checks.push_back(grads);
  return rep;
}

SuiteReport correction(std::uint64_t seed) {
  Rng rng(seed);
  SuiteReport rep{"correction", seed, {}};
  CheckResult phi{"phi_gradient_bound"}, psi{"psi_gradient_bound"}, fd{"bump_gradient_consistency"};
  for (int trial = 0; trial < 100000; ++trial) {
    const double r = std::exp(uniform(rng, std::log(1e-4), 0.0));
    const double rad = uniform(rng, 0.0, 2.2 * r), t = uniform(rng, 0.0, 2.0 * kPi);
    const Vec2 x = rad * rotate({1.0, 0.0}, t);
    record(phi, norm(eval_phi(r, x).grad) / (1.5 / r + 1e-9));
    record(psi, norm(eval_psi(r, x).grad) / (1.5 / r + 1e-9));
    if (trial % 100 == 0) {
      const double e = 1e-6 * r;
      for (auto* f : {&eval_phi, &eval_psi}) {
        const Vec2 g{((*f)(r, x + Vec2{e, 0}).value - (*f)(r, x - Vec2{e, 0}).value) / (2 * e),
                     ((*f)(r, x + Vec2{0, e}).value - (*f)(r, x - Vec2{0, e}).value) / (2 * e)};
        record(fd, norm(g - (*f)(r, x).grad) / (1e-5 / r));
      }
    }
  }
  rep.checks.push_back(phi);
  rep.checks.push_back(psi);
  rep.checks.push_back(fd);

  // Corrected interpolant matches the modified interpolant on every T2 element.
  CheckResult admissible{"subdivided_band_admissible"}, match{"modified_values_on_t2"}, t1{"lagrange_values_elsewhere"},
      boundary{"correction_vanishes_on_boundary"};
  const ManufacturedSolution u = paraboloid();
  for (int nx : {8, 16, 32}) {
    const double h = 1.0 / nx;
    const SubdividedBandMesh sb = subdivided_band_mesh(nx, h * h * h);
    const Triangulation& tri = sb.mesh;
    const MeshClassification cls = classify(tri, 0.9 * kPi);
    const CorrectionSpec spec = build_correction(u, tri, cls);
    const SufficientReport sr = sufficient_check(tri, cls, spec);
    record(admissible, spec.admissible && sr.verdict && !cls.t2.empty() ? 0.0 : 2.0);
    if (!spec.admissible) continue;
    const NodalField f = corrected_interpolant(u, tri, spec);
    std::vector<char> touched(tri.num_vertices(), 0);
    for (int k : cls.t2) {
      const TriangleGeom& g = tri.geom(k);
      const ModifiedInterp m = modified_element_interp(u, g);
      const Triangle& t = tri.triangle(k);
      for (int a = 0; a < 3; ++a) {
        const Point2 p = tri.vertex(t[a]);
        record(match, std::abs(f.values[t[a]] - m.v(p)) / (1e-12 * (1.0 + std::abs(m.v(p)))));
        touched[t[a]] = 1;
      }
    }
    for (std::size_t v = 0; v < tri.num_vertices(); ++v) {
      if (touched[v]) continue;
      const double uv = u.u(tri.vertex(static_cast<int>(v)));
      record(t1, std::abs(f.values[v] - uv) / (1e-14 * (1.0 + std::abs(uv))));
    }
    for (int s = 0; s < 400; ++s) {
      const double q = uniform(rng, 0.0, 1.0);
      const Point2 pts[4] = {{q, 0.0}, {q, 1.0}, {0.0, q}, {1.0, q}};
      for (const Point2& p : pts) record(boundary, std::abs(eval_correction(u, spec, p).value) / 1e-14);
    }
  }
  rep.checks.push_back(admissible);
  rep.checks.push_back(match);
  rep.checks.push_back(t1);
  rep.checks.push_back(boundary);

  // A cluster takes the tangent plane at its centre on all of its vertices.
  CheckResult plane{"cluster_tangent_plane"};
  {
    const ClusterMesh cm = cluster_mesh(16, {6, 6, 2}, 256);
    const MeshClassification cls = classify(cm.mesh, 0.9 * kPi);
    const std::vector<Cluster> clusters{Cluster{cm.cluster}};
    const CorrectionSpec spec = build_correction(u, cm.mesh, cls, clusters);
    record(plane, spec.admissible ? 0.0 : 2.0);
    if (spec.admissible) {
      const NodalField f = corrected_interpolant(u, cm.mesh, spec);
      const Bump* b = nullptr;
      for (const Bump& x : spec.bumps) {
        if (x.kind == BumpKind::Psi) b = &x;
      }
      record(plane, b ? 0.0 : 2.0);
      for (int k : cm.cluster) {
        for (int v : cm.mesh.triangle(k)) {
          const double pv = b ? b->plane(cm.mesh.vertex(v)) : 0.0;
          record(plane, std::abs(f.values[v] - pv) / (1e-12 * (1.0 + std::abs(pv))));
        }
      }
    }
  }
  rep.checks.push_back(plane);
  return rep;
}

SuiteReport necessary(std::uint64_t seed) {
  SuiteReport rep{"necessary", seed, {}};
  CheckResult trace{"trace_weighted_sum"}, split{"split_consistency"}, lhs{"necessary_lhs_vs_closed_form"},
      sin_bound{"tilde_sin_bound"}, multi{"multi_band_aggregate"},
      chain{"a1_lower_bound"};
  const ManufacturedSolution u = paraboloid();
  for (int nx : {8, 16, 32}) {
    const double h = 1.0 / nx, hbar = h * h * h;
    const SingleBandMesh sb = single_band_mesh(nx, hbar);
    const NodalField U = solve(assemble(sb.mesh, u)).field;
    const BandTrace tr = band_trace(sb.mesh, U, sb.band);
    record(trace, std::abs(tr.weighted_sum) / (1e-10 * std::max(tr.scale, 1e-300)));
    const BandErrorSplit s = band_split(u, U, sb.band, sb.mesh);
    const double tilde = h1_error(u, U, sb.mesh, sb.band.even_elements);
    record(split, std::abs(s.a1 + s.a2 - tilde) / (1e-12 * tilde));
    const NecessaryReport nec = necessary_lhs({sb.band}, sb.mesh, 1.0);
    // A1 against its lower bound with the measured slope jumps in place of C L^2 / N.
    const double a1_lower = nec.bands[0].min_inv_sin * std::sqrt(nec.bands[0].min_tilde_area * tr.slope_jumps_sq);
    record(chain, s.a1 >= a1_lower * (1.0 - 1e-12) ? 0.0 : 2.0);
    const double closed = h * h / std::sqrt(hbar) * std::sqrt(sb.band.length) / (4.0 * std::sqrt(2.0));
    record(lhs, nec.bands[0].value >= closed ? 0.0 : 2.0);
    for (int i = 1; i <= sb.band.n(); ++i) {
      record(sin_bound, 1.0 / tilde_sin(sb.mesh, sb.band, i) > sb.band.base_h / (4.0 * sb.band.height) ? 0.0 : 2.0);
    }
  }
  for (auto [nx, ny] : std::vector<std::pair<int, int>>{{8, 64}, {16, 256}, {8, 512}}) {
    const RowMesh ba = babuska_aziz(nx, ny);
    const NecessaryReport nec = necessary_lhs(ba.bands, ba.mesh, 1.0);
    record(multi, nec.aggregate >= nec.multi_closed_form * (1.0 - 1e-12) ? 0.0 : 2.0);
  }
  rep.checks.push_back(trace);
  rep.checks.push_back(split);
  rep.checks.push_back(chain);
  rep.checks.push_back(lhs);
  rep.checks.push_back(sin_bound);
  rep.checks.push_back(multi);
  return rep;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

std::vector<std::string> suite_names() { return {"identities", "interp", "correction", "necessary"}; }

SuiteReport run_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "identities") return identities(seed);
  if (suite == "interp") return interp(seed);
  if (suite == "correction") return correction(seed);
  if (suite == "necessary") return necessary(seed);
  throw InvalidConfiguration("unknown suite '" + suite + "'");
}

Json to_json(const SuiteReport& r) {
  Json checks = Json::array();
  for (const CheckResult& c : r.checks) {
    checks.push_back({{"name", c.name}, {"trials", c.trials}, {"failures", c.failures}, {"worst", number(c.worst)},
                      {"passed", c.passed()}});
  }
  return {{"suite", r.suite}, {"seed", r.seed}, {"passed", r.passed()}, {"checks", checks}};
}

}  // namespace degfem
