#include "degfem/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace degfem {

double BoundingBox::diameter() const { return std::hypot(width(), height()); }

namespace {

bool on_box_boundary(Point2 p, const BoundingBox& box, double tol) {
  return std::abs(p.x - box.xmin) <= tol || std::abs(p.x - box.xmax) <= tol ||
         std::abs(p.y - box.ymin) <= tol || std::abs(p.y - box.ymax) <= tol;
}

bool segment_on_box_side(Point2 a, Point2 b, const BoundingBox& box, double tol) {
  auto same = [tol](double u, double v, double w) {
    return std::abs(u - w) <= tol && std::abs(v - w) <= tol;
  };
  return same(a.x, b.x, box.xmin) || same(a.x, b.x, box.xmax) || same(a.y, b.y, box.ymin) ||
         same(a.y, b.y, box.ymax);
}

void check_duplicates(const std::vector<Point2>& vertices, double tol) {
  std::vector<int> order(vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return vertices[a].x < vertices[b].x ||
           (vertices[a].x == vertices[b].x && vertices[a].y < vertices[b].y);
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Point2 p = vertices[order[i]];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Point2 q = vertices[order[j]];
      if (q.x - p.x > tol) break;
      if (distance(p, q) <= tol) {
        throw DuplicateVertex("vertices " + std::to_string(order[i]) + " and " +
                              std::to_string(order[j]) + " coincide");
      }
    }
  }
}

}  // namespace

Triangulation Triangulation::build(std::vector<Point2> vertices, std::vector<Triangle> triangles) {
  Triangulation t;
  if (vertices.empty() || triangles.empty()) throw MeshError("empty mesh");
  const int nv = static_cast<int>(vertices.size());

  BoundingBox box{vertices[0].x, vertices[0].x, vertices[0].y, vertices[0].y};
  for (const Point2& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshError("non-finite vertex");
    box.xmin = std::min(box.xmin, p.x);
    box.xmax = std::max(box.xmax, p.x);
    box.ymin = std::min(box.ymin, p.y);
    box.ymax = std::max(box.ymax, p.y);
  }
  const double diam = box.diameter();
  check_duplicates(vertices, 1e-13 * diam);

  t.geoms_.reserve(triangles.size());
  std::vector<char> used(vertices.size(), 0);
  for (std::size_t k = 0; k < triangles.size(); ++k) {
    const Triangle& tr = triangles[k];
    for (int v : tr) {
      if (v < 0 || v >= nv) throw MeshError("triangle " + std::to_string(k) + ": bad vertex index");
      used[static_cast<std::size_t>(v)] = 1;
    }
    if (tr[0] == tr[1] || tr[1] == tr[2] || tr[0] == tr[2]) {
      throw MeshError("triangle " + std::to_string(k) + ": repeated vertex");
    }
    const Point2 p0 = vertices[tr[0]], p1 = vertices[tr[1]], p2 = vertices[tr[2]];
    if (!(cross(p1 - p0, p2 - p0) > 0.0)) {
      throw InvertedElement("triangle " + std::to_string(k) + " is not counter-clockwise");
    }
    try {
      t.geoms_.push_back(tri_metrics(p0, p1, p2));
    } catch (const DegenerateTriangle&) {
      throw InvertedElement("triangle " + std::to_string(k) + " is degenerate");
    }
  }
  if (std::find(used.begin(), used.end(), 0) != used.end()) {
    throw MeshError("mesh has vertices not referenced by any triangle");
  }

  // Each directed edge may appear once; an interior edge appears once per direction.
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t k = 0; k < triangles.size(); ++k) {
    const Triangle& tr = triangles[k];
    for (int i = 0; i < 3; ++i) {
      const auto key = std::make_pair(tr[i], tr[(i + 1) % 3]);
      if (!directed.emplace(key, static_cast<int>(k)).second) {
        throw NonConforming("edge (" + std::to_string(key.first) + "," +
                            std::to_string(key.second) + ") used twice with the same orientation");
      }
    }
  }
  for (const auto& [key, k] : directed) {
    const EdgeKey ek(key.first, key.second);
    auto it = t.edge_lookup_.find(ek);
    if (it == t.edge_lookup_.end()) {
      Edge e;
      e.key = ek;
      e.triangles[0] = k;
      t.edge_lookup_.emplace(ek, static_cast<int>(t.edges_.size()));
      t.edges_.push_back(e);
    } else {
      Edge& e = t.edges_[static_cast<std::size_t>(it->second)];
      if (e.triangles[1] >= 0) throw NonConforming("edge shared by more than two triangles");
      e.triangles[1] = k;
      if (e.triangles[0] > e.triangles[1]) std::swap(e.triangles[0], e.triangles[1]);
    }
  }
  // Sort edges by key so edge numbering is deterministic and independent of insertion.
  std::sort(t.edges_.begin(), t.edges_.end(),
            [](const Edge& a, const Edge& b) { return a.key < b.key; });
  for (Edge& e : t.edges_) {
    if (e.triangles[1] >= 0 && e.triangles[0] > e.triangles[1]) {
      std::swap(e.triangles[0], e.triangles[1]);
    }
  }
  t.edge_lookup_.clear();
  for (std::size_t i = 0; i < t.edges_.size(); ++i) {
    t.edge_lookup_.emplace(t.edges_[i].key, static_cast<int>(i));
  }

  const double tol = 1e-12 * diam;
  t.boundary_flags_.assign(vertices.size(), 0);
  for (const Edge& e : t.edges_) {
    if (!e.boundary()) continue;
    const Point2 a = vertices[e.key.lo], b = vertices[e.key.hi];
    if (!segment_on_box_side(a, b, box, tol)) {
      throw NonConforming("boundary edge (" + std::to_string(e.key.lo) + "," +
                          std::to_string(e.key.hi) + ") lies inside the domain (hanging node or gap)");
    }
    t.boundary_flags_[e.key.lo] = 1;
    t.boundary_flags_[e.key.hi] = 1;
  }
  for (int v = 0; v < nv; ++v) {
    if (!t.boundary_flags_[v] && on_box_boundary(vertices[v], box, tol)) {
      throw NonConforming("vertex " + std::to_string(v) + " on the domain boundary has no boundary edge");
    }
  }

  double area = 0.0;
  double hmax = 0.0;
  for (const TriangleGeom& g : t.geoms_) {
    area += g.area;
    hmax = std::max(hmax, g.diameter);
  }
  const double box_area = box.width() * box.height();
  if (std::abs(area - box_area) > 1e-10 * box_area) {
    throw NonConforming("element areas do not sum to the domain area (overlap or gap)");
  }

  t.vertex_triangles_.assign(vertices.size(), {});
  for (std::size_t k = 0; k < triangles.size(); ++k) {
    for (int v : triangles[k]) t.vertex_triangles_[v].push_back(static_cast<int>(k));
  }

  t.total_area_ = area;
  t.mesh_size_ = hmax;
  t.bounds_ = box;
  t.vertices_ = std::move(vertices);
  t.triangles_ = std::move(triangles);
  return t;
}

std::optional<int> Triangulation::edge_index(int a, int b) const {
  auto it = edge_lookup_.find(EdgeKey(a, b));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t Triangulation::num_boundary_vertices() const {
  return static_cast<std::size_t>(std::count(boundary_flags_.begin(), boundary_flags_.end(), 1));
}

std::size_t Triangulation::num_boundary_edges() const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.boundary(); }));
}

std::size_t Triangulation::num_interior_edges() const { return edges_.size() - num_boundary_edges(); }

MeshClassification classify(const Triangulation& tri, double alpha0) {
  if (!(alpha0 > std::numbers::pi / 3.0 && alpha0 < std::numbers::pi)) {
    throw std::invalid_argument("classify: alpha0 must lie in (pi/3, pi)");
  }
  MeshClassification c;
  c.alpha0 = alpha0;
  for (std::size_t k = 0; k < tri.num_triangles(); ++k) {
    (tri.geom(static_cast<int>(k)).max_angle <= alpha0 ? c.t1 : c.t2).push_back(static_cast<int>(k));
  }
  return c;
}

std::string format_shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_mesh(std::ostream& os, const Triangulation& tri) {
  os << tri.num_vertices() << ' ' << tri.num_triangles() << '\n';
  for (const Point2& p : tri.vertices()) {
    os << format_shortest(p.x) << ' ' << format_shortest(p.y) << '\n';
  }
  for (const Triangle& t : tri.triangles()) {
    os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
}

namespace {

double parse_double(const std::string& tok) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw MeshError("mesh file: bad number '" + tok + "'");
  }
  return v;
}

}  // namespace

Triangulation read_mesh(std::istream& is) {
  long long nv = -1, nt = -1;
  if (!(is >> nv >> nt) || nv <= 0 || nt <= 0) throw MeshError("mesh file: bad header");
  std::vector<Point2> vertices(static_cast<std::size_t>(nv));
  std::string sx, sy;
  for (auto& p : vertices) {
    if (!(is >> sx >> sy)) throw MeshError("mesh file: truncated vertex list");
    p = {parse_double(sx), parse_double(sy)};
  }
  std::vector<Triangle> triangles(static_cast<std::size_t>(nt));
  for (auto& t : triangles) {
    if (!(is >> t[0] >> t[1] >> t[2])) throw MeshError("mesh file: truncated triangle list");
  }
  return Triangulation::build(std::move(vertices), std::move(triangles));
}

}  // namespace degfem
