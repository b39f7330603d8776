#include "degfem/interp.hpp"

#include "degfem/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace degfem {

namespace {

void require_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw NonpositiveRadius("bump radius must be positive");
}

// Distance between closed segments pq and rs.
double point_segment(Point2 x, Point2 p, Point2 q) {
  const Vec2 e = q - p;
  const double ee = dot(e, e);
  double t = ee > 0.0 ? dot(x - p, e) / ee : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(x, p + t * e);
}

bool segments_cross(Point2 p, Point2 q, Point2 r, Point2 s) {
  const double d1 = cross(q - p, r - p), d2 = cross(q - p, s - p);
  const double d3 = cross(s - r, p - r), d4 = cross(s - r, q - r);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double segment_distance(Point2 p, Point2 q, Point2 r, Point2 s) {
  if (segments_cross(p, q, r, s)) return 0.0;
  return std::min({point_segment(p, r, s), point_segment(q, r, s), point_segment(r, p, q), point_segment(s, p, q)});
}

std::vector<std::pair<int, int>> boundary_edges(const Triangulation& tri, const std::vector<int>& elements) {
  std::map<EdgeKey, int> count;
  for (int k : elements) {
    const Triangle& t = tri.triangle(k);
    for (int a = 0; a < 3; ++a) ++count[EdgeKey(t[a], t[(a + 1) % 3])];
  }
  std::vector<std::pair<int, int>> out;
  for (const auto& [key, c] : count) {
    if (c == 1) out.emplace_back(key.lo, key.hi);
  }
  return out;
}

Point2 bbox_center(const Triangulation& tri, const std::vector<int>& elements) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (int k : elements) {
    for (int v : tri.triangle(k)) {
      const Point2 p = tri.vertex(v);
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  }
  return {0.5 * (x0 + x1), 0.5 * (y0 + y1)};
}

double bump_term(const ManufacturedSolution& u, const Bump& b, Point2 x) {
  const Vec2 d = x - b.center;
  if (b.kind == BumpKind::Phi) return b.amplitude * eval_phi(b.radius, d).value;
  const double psi = eval_psi(b.radius, d).value;
  return psi == 0.0 ? 0.0 : (b.plane(x) - u.u(x)) * psi;
}

}  // namespace

BumpValue eval_phi(double r, Vec2 x) {
  require_radius(r);
  const double t = norm(x) / r;
  if (t >= 1.0) return {};
  const double s = t - 1.0;
  // d/dx of phi~(|x|/r) = 6 t (t-1) / r * x/|x| = 6 (t-1) x / r^2
  return {2.0 * s * s * s + 3.0 * s * s, (6.0 * s / (r * r)) * x};
}

BumpValue eval_psi(double r, Vec2 x) {
  require_radius(r);
  const double rho = norm(x);
  const double t = rho / r;
  if (t <= 1.0) return {1.0, {}};
  if (t >= 2.0) return {};
  const double s = t - 2.0;
  const double dpsi = 6.0 * s * (t - 1.0);
  return {2.0 * s * s * s + 3.0 * s * s, (dpsi / (r * rho)) * x};
}

NodalField lagrange(const ManufacturedSolution& u, const Triangulation& tri) {
  NodalField f;
  f.values.reserve(tri.num_vertices());
  for (const Point2& p : tri.vertices()) f.values.push_back(u.u(p));
  return f;
}

ModifiedInterp modified_element_interp(const ManufacturedSolution& u, const TriangleGeom& k) {
  ModifiedInterp m;
  m.frame = altitude_frame(k);
  const Point2 a = k.a(), b = k.b(), c = k.c();
  const double ub = u.u(b), uc = u.u(c);
  const double tangential = (uc - ub) / distance(c, b);
  const double normal = dot(u.grad(m.frame.foot), m.frame.v2);
  const Vec2 g = tangential * m.frame.v1 + normal * m.frame.v2;
  m.v.g = g;
  m.v.c = ub - dot(g, b);
  const double va = ub + dot(g, a - b);
  m.values = {va, ub, uc};
  m.delta = va - u.u(a);
  return m;
}

Affine tangent_plane(const ManufacturedSolution& u, Point2 xc) {
  Affine v;
  v.g = u.grad(xc);
  v.c = u.u(xc) - dot(v.g, xc);
  return v;
}

CorrectionSpec build_correction(const ManufacturedSolution& u, const Triangulation& tri,
                                const MeshClassification& cls, const std::vector<Cluster>& clusters,
                                const CorrectionOptions& options) {
  const int nt = static_cast<int>(tri.num_triangles());
  std::vector<char> kind(static_cast<std::size_t>(nt), 0);  // 1: T1, 2: T2
  for (int k : cls.t1) {
    if (k < 0 || k >= nt || kind[k]) throw InconsistentClassification("bad or repeated T1 index");
    if (tri.geom(k).max_angle > cls.alpha0) throw InconsistentClassification("T1 element above alpha0");
    kind[k] = 1;
  }
  for (int k : cls.t2) {
    if (k < 0 || k >= nt || kind[k]) throw InconsistentClassification("bad or repeated T2 index");
    if (!(tri.geom(k).max_angle > cls.alpha0)) throw InconsistentClassification("T2 element below alpha0");
    kind[k] = 2;
  }
  if (cls.t1.size() + cls.t2.size() != static_cast<std::size_t>(nt)) {
    throw InconsistentClassification("classification does not cover the mesh");
  }
  std::vector<int> cluster_of(static_cast<std::size_t>(nt), -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (clusters[c].elements.empty()) throw InconsistentClassification("empty cluster");
    for (int k : clusters[c].elements) {
      if (k < 0 || k >= nt || cluster_of[k] >= 0) throw InconsistentClassification("bad or shared cluster element");
      cluster_of[k] = static_cast<int>(c);
    }
  }

  CorrectionSpec spec;
  spec.mesh_size = tri.mesh_size();
  spec.cluster_constant = options.cluster_constant;
  spec.h2_budget = options.h2_budget > 0.0 ? options.h2_budget : 4.0 * tri.total_area();
  spec.min_support_gap = std::numeric_limits<double>::infinity();
  spec.min_vertex_clearance = std::numeric_limits<double>::infinity();
  spec.min_cluster_separation = std::numeric_limits<double>::infinity();

  for (int k : cls.t2) {
    const TriangleGeom& g = tri.geom(k);
    if (cluster_of[k] >= 0) continue;
    spec.sum_h2 += g.diameter * g.diameter;
    Bump b;
    b.kind = BumpKind::Phi;
    b.center = g.a();
    b.radius = 0.5 * std::min(distance(g.a(), g.b()), distance(g.a(), g.c()));
    b.amplitude = modified_element_interp(u, g).delta;
    b.owner = k;
    spec.bumps.push_back(b);
  }
  std::vector<double> cluster_radius(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    Bump b;
    b.kind = BumpKind::Psi;
    b.center = bbox_center(tri, clusters[c].elements);
    const double diam = element_set_diameter(tri, clusters[c].elements);
    b.radius = diam;
    b.plane = tangent_plane(u, b.center);
    b.owner = static_cast<int>(c);
    cluster_radius[c] = diam;
    spec.bumps.push_back(b);
  }

  auto violate = [&spec](char cond, std::string detail, std::vector<int> who) {
    spec.admissible = false;
    spec.violations.push_back({cond, std::move(detail), std::move(who)});
  };

  // (a) support disjointness, sweep over x.
  {
    std::vector<int> order(spec.bumps.size());
    std::iota(order.begin(), order.end(), 0);
    auto left = [&](int i) { return spec.bumps[i].center.x - spec.bumps[i].support_radius(); };
    std::sort(order.begin(), order.end(), [&](int a, int b) { return left(a) < left(b); });
    double max_support = 0.0;
    for (const Bump& b : spec.bumps) max_support = std::max(max_support, b.support_radius());
    std::vector<int> offenders;
    for (std::size_t p = 0; p < order.size(); ++p) {
      const Bump& bp = spec.bumps[order[p]];
      for (std::size_t q = p + 1; q < order.size(); ++q) {
        const Bump& bq = spec.bumps[order[q]];
        if (left(order[q]) > bp.center.x + bp.support_radius() + max_support) break;
        const double gap = distance(bp.center, bq.center) - bp.support_radius() - bq.support_radius();
        spec.min_support_gap = std::min(spec.min_support_gap, gap);
        if (gap < 0.0) {
          offenders.push_back(order[p]);
          offenders.push_back(order[q]);
        }
      }
    }
    if (!offenders.empty()) violate('a', "bump supports overlap", offenders);
  }

  // (b) no B/C vertex of another T2 element inside a phi support.
  {
    struct Tagged {
      Point2 p;
      int element;
    };
    std::vector<Tagged> pts;
    for (int k : cls.t2) {
      const TriangleGeom& g = tri.geom(k);
      pts.push_back({g.b(), k});
      pts.push_back({g.c(), k});
    }
    std::sort(pts.begin(), pts.end(), [](const Tagged& a, const Tagged& b) { return a.p.x < b.p.x; });
    std::vector<int> offenders;
    for (const Bump& b : spec.bumps) {
      if (b.kind != BumpKind::Phi) continue;
      auto lo = std::lower_bound(pts.begin(), pts.end(), b.center.x - b.radius,
                                 [](const Tagged& t, double x) { return t.p.x < x; });
      bool bad = false;
      for (auto it = lo; it != pts.end() && it->p.x <= b.center.x + b.radius; ++it) {
        if (it->element == b.owner) continue;
        const double d = distance(it->p, b.center);
        spec.min_vertex_clearance = std::min(spec.min_vertex_clearance, d / b.radius);
        if (d < b.radius) bad = true;
      }
      if (bad) offenders.push_back(b.owner);
    }
    if (!offenders.empty()) violate('b', "foreign T2 vertex inside a phi support", offenders);
  }

  // (c) sum of h_K^2 over the isolated T2 elements.
  if (spec.sum_h2 > spec.h2_budget) violate('c', "sum of h_K^2 over T2 exceeds the budget", {});

  // (d) cluster diameter against h^(1/2).
  {
    std::vector<int> offenders;
    const double root_h = std::sqrt(spec.mesh_size);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const double ratio = cluster_radius[c] / root_h;
      spec.max_cluster_ratio = std::max(spec.max_cluster_ratio, ratio);
      if (ratio > options.cluster_constant) offenders.push_back(static_cast<int>(c));
    }
    if (!offenders.empty()) violate('d', "cluster diameter exceeds c h^(1/2)", offenders);
  }

  // (e) pairwise cluster separation.
  {
    std::vector<std::vector<std::pair<int, int>>> rims;
    for (const Cluster& c : clusters) rims.push_back(boundary_edges(tri, c.elements));
    std::vector<int> offenders;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& [p, q] : rims[a]) {
          for (const auto& [r, s] : rims[b]) {
            d = std::min(d, segment_distance(tri.vertex(p), tri.vertex(q), tri.vertex(r), tri.vertex(s)));
          }
        }
        const double need = 2.0 * (cluster_radius[a] + cluster_radius[b]);
        spec.min_cluster_separation = std::min(spec.min_cluster_separation, d / need);
        if (d < need) {
          offenders.push_back(static_cast<int>(a));
          offenders.push_back(static_cast<int>(b));
        }
      }
    }
    if (!offenders.empty()) violate('e', "clusters closer than 2 (r_i + r_j)", offenders);
  }
  return spec;
}

NodalField corrected_interpolant(const ManufacturedSolution& u, const Triangulation& tri,
                                 const CorrectionSpec& spec) {
  if (!spec.admissible) throw InadmissibleCorrection("correction specification is not admissible");
  NodalField f = lagrange(u, tri);
  if (spec.bumps.empty()) return f;
  std::vector<int> order(tri.num_vertices());
  std::iota(order.begin(), order.end(), 0);
  const auto& pts = tri.vertices();
  std::sort(order.begin(), order.end(), [&](int a, int b) { return pts[a].x < pts[b].x; });
  for (const Bump& b : spec.bumps) {
    const double s = b.support_radius();
    auto lo = std::lower_bound(order.begin(), order.end(), b.center.x - s,
                               [&](int v, double x) { return pts[v].x < x; });
    for (auto it = lo; it != order.end() && pts[*it].x <= b.center.x + s; ++it) {
      f.values[*it] += bump_term(u, b, pts[*it]);
    }
  }
  return f;
}

BumpValue eval_correction(const ManufacturedSolution& u, const CorrectionSpec& spec, Point2 x) {
  BumpValue w;
  for (const Bump& b : spec.bumps) {
    const Vec2 d = x - b.center;
    if (norm(d) >= b.support_radius()) continue;
    if (b.kind == BumpKind::Phi) {
      const BumpValue p = eval_phi(b.radius, d);
      w.value += b.amplitude * p.value;
      w.grad = w.grad + b.amplitude * p.grad;
    } else {
      const BumpValue p = eval_psi(b.radius, d);
      const double diff = b.plane(x) - u.u(x);
      w.value += diff * p.value;
      w.grad = w.grad + p.value * (b.plane.g - u.grad(x)) + diff * p.grad;
    }
  }
  return w;
}

}  // namespace degfem
