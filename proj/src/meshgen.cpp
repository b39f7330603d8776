#include "degfem/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <functional>
#include <set>
#include <string>

namespace degfem {

namespace {

struct Chain {
  std::vector<int> ids;
  std::vector<long long> keys;  // integer positions along the chain, increasing
};

// Triangulates the strip between two parallel chains spanning the same interval.
// The bottom chain lies to the right of the direction of travel.
// Ties go to the bottom chain unless bottom_wins_ties is false.
// emit(triangle, advanced_bottom, index_of_advanced_step).
template <class Emit>
void merge_chains(const Chain& bot, const Chain& top, Emit&& emit, bool bottom_wins_ties = true) {
  std::size_t a = 0, b = 0;
  while (a + 1 < bot.ids.size() || b + 1 < top.ids.size()) {
    bool advance_bottom;
    if (a + 1 >= bot.ids.size()) {
      advance_bottom = false;
    } else if (b + 1 >= top.ids.size()) {
      advance_bottom = true;
    } else {
      advance_bottom = bottom_wins_ties ? bot.keys[a + 1] <= top.keys[b + 1] : bot.keys[a + 1] < top.keys[b + 1];
    }
    if (advance_bottom) {
      emit(Triangle{bot.ids[a], bot.ids[a + 1], top.ids[b]}, true, a);
      ++a;
    } else {
      emit(Triangle{bot.ids[a], top.ids[b + 1], top.ids[b]}, false, b);
      ++b;
    }
  }
}

std::vector<long long> line_keys(int parity, int nx) {
  std::vector<long long> keys;
  if (parity == 0) {
    for (int i = 0; i <= nx; ++i) keys.push_back(2LL * i);
  } else {
    keys.push_back(0);
    for (int i = 0; i < nx; ++i) keys.push_back(2LL * i + 1);
    keys.push_back(2LL * nx);
  }
  return keys;
}

bool contains(const Triangle& t, int v) { return t[0] == v || t[1] == v || t[2] == v; }

int shared_vertices(const Triangle& a, const Triangle& b) {
  int n = 0;
  for (int v : a) n += contains(b, v) ? 1 : 0;
  return n;
}

}  // namespace

BandCheck check_band(const Triangulation& tri, const Band& band) {
  const std::size_t nk = band.odd_elements.size();
  if (nk == 0) throw BandInconsistent("band has no elements");
  if (band.gamma_edges.size() != nk) throw BandInconsistent("one Gamma edge per K_i required");
  if (band.even_elements.size() + 1 != nk) throw BandInconsistent("expected N+1 K_i and N K~_i");
  const double gn = norm(band.direction);
  if (std::abs(gn - 1.0) > 1e-12) throw BandInconsistent("direction must be a unit vector");

  double total = 0.0;
  for (std::size_t i = 0; i < nk; ++i) {
    const auto [g0, g1] = band.gamma_edges[i];
    const Triangle& t = tri.triangle(band.odd_elements[i]);
    if (!contains(t, g0) || !contains(t, g1)) {
      throw BandInconsistent("K_" + std::to_string(i) + " does not contain its Gamma edge");
    }
    if (i + 1 < nk && band.gamma_edges[i + 1][0] != g1) {
      throw BandInconsistent("Gamma edges are not consecutive at " + std::to_string(i));
    }
    const Vec2 e = tri.vertex(g1) - tri.vertex(g0);
    if (dot(e, band.direction) <= 0.0) throw BandInconsistent("Gamma edge against the band direction");
    total += norm(e);
  }
  if (std::abs(total - band.length) > 1e-12 * total) {
    throw BandInconsistent("band length differs from the sum of Gamma edge lengths");
  }

  BandCheck check;
  const Point2 origin = tri.vertex(band.gamma_edges.front()[0]);
  auto deviation = [&](int v) { return std::abs(cross(band.direction, tri.vertex(v) - origin)) / total; };
  for (const auto& e : band.gamma_edges) {
    check.collinearity_error = std::max({check.collinearity_error, deviation(e[0]), deviation(e[1])});
  }
  if (check.collinearity_error > 1e-12) throw BandInconsistent("Gamma edges are not collinear");

  for (std::size_t i = 1; i < nk; ++i) {
    const Triangle& kt = tri.triangle(band.even_elements[i - 1]);
    if (shared_vertices(kt, tri.triangle(band.odd_elements[i - 1])) != 2 ||
        shared_vertices(kt, tri.triangle(band.odd_elements[i])) != 2) {
      throw BandInconsistent("K~_" + std::to_string(i) + " must share an edge with K_" +
                             std::to_string(i - 1) + " and K_" + std::to_string(i));
    }
    if (!contains(kt, band.gamma_edges[i][0])) {
      throw BandInconsistent("K~_" + std::to_string(i) + " does not touch Gamma");
    }
  }

  auto fail = [&check](int i) {
    if (check.alternation_ok) check.first_alternation_failure = i;
    check.alternation_ok = false;
  };
  for (std::size_t i = 0; i < nk; ++i) {
    const int k = band.odd_elements[i];
    const int a = tri.triangle(k)[tri.geom(k).max_angle_vertex];
    if (a == band.gamma_edges[i][0] || a == band.gamma_edges[i][1]) fail(static_cast<int>(2 * i));
    if (i >= 1) {
      const int kt = band.even_elements[i - 1];
      const int at = tri.triangle(kt)[tri.geom(kt).max_angle_vertex];
      if (at != band.gamma_edges[i][0]) fail(static_cast<int>(2 * i - 1));
    }
  }
  return check;
}

int tilde_apex(const Triangulation&, const Band& band, int i) {
  if (i < 1 || i > band.n()) throw std::out_of_range("tilde_apex: index outside 1..N");
  return band.gamma_edges[static_cast<std::size_t>(i)][0];
}

RowMesh row_mesh(const RowSpec& rows, double base_h) {
  const auto& ys = rows.y_levels;
  if (ys.size() < 2) throw InvalidRowSpec("need at least two y levels");
  if (rows.parity.size() != ys.size()) throw InvalidRowSpec("one parity per y level required");
  if (ys.front() != 0.0 || ys.back() != 1.0) throw InvalidRowSpec("y levels must start at 0 and end at 1");
  for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
    if (!(ys[j] < ys[j + 1])) throw InvalidRowSpec("y levels must be strictly increasing");
  }
  for (int p : rows.parity) {
    if (p != 0 && p != 1) throw InvalidRowSpec("parity must be 0 or 1");
  }
  if (!(base_h > 0.0) || !(base_h <= 1.0)) throw InvalidRowSpec("base_h must lie in (0, 1]");
  const long long nxl = std::llround(1.0 / base_h);
  if (nxl < 1 || std::abs(static_cast<double>(nxl) * base_h - 1.0) > 1e-12) {
    throw InvalidRowSpec("1/base_h must be an integer");
  }
  const int nx = static_cast<int>(nxl);
  const double h = 1.0 / nx;

  std::vector<Point2> vertices;
  std::vector<Chain> lines(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) {
    lines[j].keys = line_keys(rows.parity[j], nx);
    for (long long key : lines[j].keys) {
      lines[j].ids.push_back(static_cast<int>(vertices.size()));
      vertices.push_back({static_cast<double>(key) / (2.0 * nx), ys[j]});
    }
  }

  std::vector<Triangle> triangles;
  RowMesh out;
  std::vector<int> cutoffs;
  std::vector<int> strip_of;
  std::vector<Band> bands;
  for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
    const Chain& bot = lines[j];
    const Chain& top = lines[j + 1];
    const bool zigzag = rows.parity[j] != rows.parity[j + 1];
    const bool even_bottom = rows.parity[j] == 0;
    Band band;
    merge_chains(bot, top, [&](Triangle t, bool advanced_bottom, std::size_t step) {
      const int id = static_cast<int>(triangles.size());
      triangles.push_back(t);
      strip_of.push_back(static_cast<int>(j));
      if (!zigzag) return;
      const Chain& chain = advanced_bottom ? bot : top;
      const bool on_even = advanced_bottom == even_bottom;
      if (on_even) {
        band.odd_elements.push_back(id);
        band.gamma_edges.push_back({chain.ids[step], chain.ids[step + 1]});
      } else if (chain.keys[step + 1] - chain.keys[step] == 1) {
        cutoffs.push_back(id);
      } else {
        band.even_elements.push_back(id);
      }
    }, even_bottom);
    if (zigzag) {
      band.direction = {1.0, 0.0};
      band.base_h = h;
      band.height = ys[j + 1] - ys[j];
      band.strip = static_cast<int>(j);
      for (const auto& e : band.gamma_edges) band.length += distance(vertices[e[0]], vertices[e[1]]);
      bands.push_back(std::move(band));
    }
  }

  out.mesh = Triangulation::build(std::move(vertices), std::move(triangles));
  out.bands = std::move(bands);
  out.cutoff_elements = std::move(cutoffs);
  out.strip_of_element = std::move(strip_of);
  return out;
}

Triangulation unit_square_uniform(int n) {
  if (n < 1) throw InvalidParameters("unit_square_uniform: n must be >= 1");
  std::vector<Point2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int b = 0; b <= n; ++b) {
    for (int a = 0; a <= n; ++a) vertices.push_back({static_cast<double>(a) / n, static_cast<double>(b) / n});
  }
  auto id = [n](int a, int b) { return b * (n + 1) + a; };
  std::vector<Triangle> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      triangles.push_back({id(a, b), id(a + 1, b), id(a + 1, b + 1)});
      triangles.push_back({id(a, b), id(a + 1, b + 1), id(a, b + 1)});
    }
  }
  return Triangulation::build(std::move(vertices), std::move(triangles));
}

RowMesh babuska_aziz(int nx, int ny) {
  if (nx < 1 || ny < 1) throw InvalidParameters("babuska_aziz: nx and ny must be >= 1");
  RowSpec rows;
  for (int j = 0; j <= ny; ++j) {
    rows.y_levels.push_back(j == ny ? 1.0 : static_cast<double>(j) / ny);
    rows.parity.push_back(j % 2);
  }
  return row_mesh(rows, 1.0 / nx);
}

SingleBandMesh single_band_mesh(int nx, double hbar) {
  if (nx < 1) throw InvalidParameters("single_band_mesh: nx must be >= 1");
  if (!(hbar > 0.0) || !(hbar < 1.0 / (2.0 * nx))) {
    throw InvalidParameters("single_band_mesh: need 0 < hbar < 1/(2 nx)");
  }
  const int m = std::max(1, static_cast<int>(std::lround(0.5 * nx)));
  RowSpec rows;
  for (int k = 0; k <= m; ++k) rows.y_levels.push_back(0.5 * k / m);
  const double y1 = 0.5 + hbar;
  for (int k = 0; k <= m; ++k) rows.y_levels.push_back(k == m ? 1.0 : y1 + (1.0 - y1) * k / m);
  for (std::size_t j = 0; j < rows.y_levels.size(); ++j) rows.parity.push_back(static_cast<int>(j % 2));

  RowMesh rm = row_mesh(rows, 1.0 / nx);
  SingleBandMesh out;
  out.band_strip = m;
  for (const Band& b : rm.bands) {
    if (b.strip == m) out.band = b;
  }
  for (std::size_t k = 0; k < rm.strip_of_element.size(); ++k) {
    if (rm.strip_of_element[k] == m) {
      out.strip_elements.push_back(static_cast<int>(k));
    } else {
      out.max_angle_outside = std::max(out.max_angle_outside, rm.mesh.geom(static_cast<int>(k)).max_angle);
    }
  }
  out.all_bands = std::move(rm.bands);
  out.mesh = std::move(rm.mesh);
  return out;
}

SubdividedBandMesh subdivided_band_mesh(int nx, double hbar) {
  SingleBandMesh sb = single_band_mesh(nx, hbar);
  const Triangulation& src = sb.mesh;
  std::vector<Point2> vertices = src.vertices();
  std::vector<Triangle> triangles = src.triangles();

  SubdividedBandMesh out;
  out.source_count = triangles.size();
  out.base_h = sb.band.base_h;
  out.height = sb.band.height;

  // Cut (v_i, v_{i+1}, apex) through the foot M of its altitude on edge (v_i, v_{i+1}).
  auto split = [&](int k, int g0, int g1, int foot) {
    const Triangle t = triangles[k];
    int p = 0;
    while (!((t[p] == g0 && t[(p + 1) % 3] == g1) || (t[p] == g1 && t[(p + 1) % 3] == g0))) ++p;
    const int vi = t[p], vj = t[(p + 1) % 3], apex = t[(p + 2) % 3];
    if (vertices[apex].x != vertices[foot].x) {
      throw std::logic_error("subdivided_band_mesh: apex is not above the Gamma midpoint");
    }
    triangles[k] = {vi, foot, apex};
    out.split_elements.push_back(k);
    out.split_elements.push_back(static_cast<int>(triangles.size()));
    triangles.push_back({foot, vj, apex});
  };

  for (std::size_t i = 0; i < sb.band.odd_elements.size(); ++i) {
    const int k = sb.band.odd_elements[i];
    const auto [g0, g1] = sb.band.gamma_edges[i];
    const Triangle& t = src.triangle(k);
    int apex = t[0];
    for (int v : t) {
      if (v != g0 && v != g1) apex = v;
    }
    const int foot = static_cast<int>(vertices.size());
    vertices.push_back({vertices[apex].x, vertices[g0].y});
    const Edge& e = src.edges()[static_cast<std::size_t>(*src.edge_index(g0, g1))];
    if (e.boundary()) throw std::logic_error("subdivided_band_mesh: Gamma edge on the boundary");
    const int neighbour = e.triangles[0] == k ? e.triangles[1] : e.triangles[0];
    split(k, g0, g1, foot);
    split(neighbour, g0, g1, foot);
    ++out.split_sources;
    ++out.split_sources;
    out.gamma_edges.push_back({g0, foot});
    out.gamma_edges.push_back({foot, g1});
  }
  out.tilde_elements = sb.band.even_elements;
  out.mesh = Triangulation::build(std::move(vertices), std::move(triangles));
  return out;
}

ClusterMesh cluster_mesh(int n, ClusterBlock block, int rows_in_block) {
  const int i = block.i, j = block.j, k = block.k, R = rows_in_block;
  if (n < 3 || k < 1 || R < 1) throw BlockOutOfRange("cluster_mesh: need n >= 3, k >= 1, rows >= 1");
  if (i < 1 || j < 1 || i + k > n - 1 || j + k > n - 1) {
    throw BlockOutOfRange("cluster_mesh: block must keep a one-cell margin inside the square");
  }

  // Integer lattice: X in units 1/(2n), Y in units 1/(nR).
  std::map<std::pair<long long, long long>, int> index;
  std::vector<Point2> vertices;
  auto vid = [&](long long X, long long Y) {
    auto [it, fresh] = index.emplace(std::make_pair(X, Y), static_cast<int>(vertices.size()));
    if (fresh) {
      vertices.push_back({static_cast<double>(X) / (2.0 * n), static_cast<double>(Y) / (static_cast<double>(n) * R)});
    }
    return it->second;
  };
  auto grid = [&](int a, int b) { return vid(2LL * a, static_cast<long long>(b) * R); };

  std::vector<Triangle> triangles;
  std::vector<int> cluster;
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      if (b >= j && b < j + k && a >= i - 1 && a <= i + k) continue;
      triangles.push_back({grid(a, b), grid(a + 1, b), grid(a + 1, b + 1)});
      triangles.push_back({grid(a, b), grid(a + 1, b + 1), grid(a, b + 1)});
    }
  }

  auto emit_cluster = [&](Triangle t, bool, std::size_t) {
    cluster.push_back(static_cast<int>(triangles.size()));
    triangles.push_back(t);
  };

  // Thin rows inside the block; first and last lines carry grid points only.
  std::vector<Chain> lines(static_cast<std::size_t>(R) + 1);
  std::vector<long long> line_y(static_cast<std::size_t>(R) + 1);
  auto line_parity = [R](int r) { return r == R ? 0 : r % 2; };
  for (int r = 0; r <= R; ++r) {
    const int parity = line_parity(r);
    const long long Y = static_cast<long long>(j) * R + static_cast<long long>(r) * k;
    line_y[r] = Y;
    for (long long key : line_keys(parity, k)) {
      const long long X = 2LL * i + key;
      lines[r].keys.push_back(X);
      lines[r].ids.push_back(vid(X, Y));
    }
  }
  for (int r = 0; r < R; ++r) {
    merge_chains(lines[r], lines[r + 1], emit_cluster, line_parity(r) == 0 || line_parity(r + 1) == 1);
  }

  // Side columns: zig-zag between the outer grid line and the block side.
  Chain outer_left, outer_right, side_left, side_right;
  for (int m = 0; m <= k; ++m) {
    const long long Y = static_cast<long long>(j + m) * R;
    outer_left.ids.push_back(grid(i - 1, j + m));
    outer_left.keys.push_back(Y);
    outer_right.ids.push_back(grid(i + k + 1, j + m));
    outer_right.keys.push_back(Y);
  }
  for (int r = 0; r <= R; ++r) {
    side_left.ids.push_back(vid(2LL * i, line_y[r]));
    side_left.keys.push_back(line_y[r]);
    side_right.ids.push_back(vid(2LL * (i + k), line_y[r]));
    side_right.keys.push_back(line_y[r]);
  }
  // Travelling upward, the chain with larger x is the "bottom" one.
  merge_chains(side_left, outer_left, emit_cluster);
  merge_chains(outer_right, side_right, emit_cluster);

  ClusterMesh out;
  out.mesh = Triangulation::build(std::move(vertices), std::move(triangles));
  out.cluster = std::move(cluster);
  out.diameter = element_set_diameter(out.mesh, out.cluster);
  out.block_diameter = k * std::sqrt(2.0) / n;
  out.n = n;
  out.block = block;
  out.rows_in_block = R;
  return out;
}

ClusterTopology cluster_topology(const Triangulation& tri, const std::vector<int>& elements) {
  ClusterTopology topo;
  if (elements.empty()) return topo;
  std::set<int> members(elements.begin(), elements.end());
  std::map<EdgeKey, int> edge_count;
  std::set<int> verts;
  for (int k : members) {
    const Triangle& t = tri.triangle(k);
    for (int a = 0; a < 3; ++a) {
      ++edge_count[EdgeKey(t[a], t[(a + 1) % 3])];
      verts.insert(t[a]);
    }
  }

  // Union-find over elements joined by interior edges.
  std::map<int, int> parent;
  for (int k : members) parent[k] = k;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::map<int, std::vector<int>> boundary_adj;
  for (const auto& [key, count] : edge_count) {
    if (count == 2) {
      const Edge& e = tri.edges()[static_cast<std::size_t>(*tri.edge_index(key.lo, key.hi))];
      parent[find(e.triangles[0])] = find(e.triangles[1]);
    } else {
      boundary_adj[key.lo].push_back(key.hi);
      boundary_adj[key.hi].push_back(key.lo);
    }
  }
  std::set<int> roots;
  for (int k : members) roots.insert(find(k));
  topo.edge_connected = roots.size() == 1;

  // Components of the boundary graph; a pinch vertex splits one walk into several loops.
  std::set<int> seen;
  int loops = 0;
  for (const auto& [v, adj] : boundary_adj) {
    if (adj.size() > 2) loops += static_cast<int>(adj.size() - 2) / 2;
    if (seen.count(v)) continue;
    ++loops;
    std::vector<int> stack{v};
    seen.insert(v);
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y : boundary_adj[x]) {
        if (seen.insert(y).second) stack.push_back(y);
      }
    }
  }
  topo.boundary_loops = loops;
  topo.euler_characteristic =
      static_cast<int>(verts.size()) - static_cast<int>(edge_count.size()) + static_cast<int>(members.size());
  return topo;
}

double element_set_diameter(const Triangulation& tri, const std::vector<int>& elements) {
  std::vector<Point2> pts;
  {
    std::set<int> verts;
    for (int k : elements) {
      for (int v : tri.triangle(k)) verts.insert(v);
    }
    for (int v : verts) pts.push_back(tri.vertex(v));
  }
  if (pts.size() < 2) return 0.0;
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  // Monotone-chain hull; the diameter is attained between hull vertices.
  std::vector<Point2> hull(2 * pts.size());
  std::size_t m = 0;
  for (std::size_t t = 0; t < pts.size(); ++t) {
    while (m >= 2 && cross(hull[m - 1] - hull[m - 2], pts[t] - hull[m - 2]) <= 0.0) --m;
    hull[m++] = pts[t];
  }
  for (std::size_t t = pts.size() - 1, lower = m + 1; t-- > 0;) {
    while (m >= lower && cross(hull[m - 1] - hull[m - 2], pts[t] - hull[m - 2]) <= 0.0) --m;
    hull[m++] = pts[t];
  }
  hull.resize(m);
  double best = 0.0;
  for (std::size_t a = 0; a < hull.size(); ++a) {
    for (std::size_t b = a + 1; b < hull.size(); ++b) best = std::max(best, distance(hull[a], hull[b]));
  }
  return best;
}

}  // namespace degfem
