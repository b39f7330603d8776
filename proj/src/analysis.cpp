#include "degfem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace degfem {

double element_error_sq(const ManufacturedSolution& u, const TriangleGeom& k, Vec2 grad, QuadDegree degree) {
  double sum = 0.0;
  for (const TriQuadPoint& q : triangle_rule(degree)) {
    const Vec2 d = u.grad(bary_point(k.vertices, q.bary)) - grad;
    sum += q.weight * dot(d, d);
  }
  return k.area * sum;
}

double h1_error(const ManufacturedSolution& u, const NodalField& field, const Triangulation& tri) {
  return h1_error(u, field, tri, QuadDegree::Two);
}

double h1_error(const ManufacturedSolution& u, const NodalField& field, const Triangulation& tri,
                QuadDegree degree) {
  double sum = 0.0;
  for (int k = 0; k < static_cast<int>(tri.num_triangles()); ++k) {
    sum += element_error_sq(u, tri.geom(k), element_gradient(tri, k, field), degree);
  }
  return std::sqrt(sum);
}

double h1_error(const ManufacturedSolution& u, const NodalField& field, const Triangulation& tri,
                const std::vector<int>& subset, QuadDegree degree) {
  double sum = 0.0;
  for (int k : subset) sum += element_error_sq(u, tri.geom(k), element_gradient(tri, k, field), degree);
  return std::sqrt(sum);
}

double l2_boundary_error(const ManufacturedSolution& u, const NodalField& field, const Triangulation& tri,
                         const std::vector<std::array<int, 2>>& edges) {
  double sum = 0.0;
  for (const auto& [p, q] : edges) {
    if (!tri.edge_index(p, q)) throw std::invalid_argument("l2_boundary_error: not a mesh edge");
    const Point2 a = tri.vertex(p), b = tri.vertex(q);
    const double len = distance(a, b);
    double local = 0.0;
    for (const LineQuadPoint& g : gauss3_rule()) {
      const Point2 x = a + g.t * (b - a);
      const double uh = (1.0 - g.t) * field.values[p] + g.t * field.values[q];
      const double d = u.u(x) - uh;
      local += g.weight * d * d;
    }
    sum += len * local;
  }
  return std::sqrt(sum);
}

double proj_p1_residual(double length, double c) {
  if (!(length > 0.0)) throw std::invalid_argument("proj_p1_residual: L must be positive");
  return std::abs(c) * std::pow(length, 2.5) / (6.0 * std::sqrt(5.0));
}

BandTrace band_trace(const Triangulation& tri, const NodalField& field, const Band& band) {
  check_band(tri, band);
  BandTrace tr;
  const std::size_t nk = band.odd_elements.size();
  for (std::size_t i = 0; i < nk; ++i) {
    const auto [p, q] = band.gamma_edges[i];
    tr.interval_lengths.push_back(distance(tri.vertex(p), tri.vertex(q)));
    tr.slopes.push_back(dot(element_gradient(tri, band.odd_elements[i], field), band.direction));
  }
  const double u_start = field.values[band.gamma_edges.front()[0]];
  const double u_end = field.values[band.gamma_edges.back()[1]];
  tr.secant_slope = (u_end - u_start) / band.length;
  for (std::size_t i = 0; i < nk; ++i) {
    tr.wprime.push_back(tr.slopes[i] - tr.secant_slope);
    tr.weighted_sum += tr.interval_lengths[i] * tr.wprime[i];
    tr.scale = std::max(tr.scale, std::abs(tr.wprime[i]));
    if (i >= 1) {
      const double d = tr.slopes[i] - tr.slopes[i - 1];
      tr.slope_jumps_sq += d * d;
    }
  }
  tr.balanced = std::abs(tr.weighted_sum) <= 1e-10 * std::max(tr.scale * band.length, 1e-300);
  return tr;
}

DifferenceBound difference_bound_oracle(const std::vector<double>& h, std::vector<double> a) {
  if (h.size() != a.size() || h.empty()) throw std::invalid_argument("difference_bound_oracle: size mismatch");
  double length = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0)) throw std::invalid_argument("difference_bound_oracle: h_i must be positive");
    length += h[i];
    moment += h[i] * a[i];
  }
  const double mean = moment / length;
  for (double& v : a) v -= mean;
  DifferenceBound out;
  double big_a = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    big_a += h[i] * a[i] * a[i];
    if (i >= 1) out.lhs += (a[i] - a[i - 1]) * (a[i] - a[i - 1]);
  }
  const std::size_t n = a.size() - 1;
  out.rhs = n >= 1 ? big_a / (length * static_cast<double>(n)) : 0.0;
  out.holds = out.lhs >= out.rhs * (1.0 - 1e-12);
  return out;
}

double tilde_sin(const Triangulation& tri, const Band& band, int i) {
  const int apex = tilde_apex(tri, band, i);
  const int k = band.even_elements[static_cast<std::size_t>(i - 1)];
  const Triangle& t = tri.triangle(k);
  int p = 0;
  while (t[p] != apex) ++p;
  const Vec2 e1 = tri.vertex(t[(p + 1) % 3]) - tri.vertex(apex);
  const Vec2 e2 = tri.vertex(t[(p + 2) % 3]) - tri.vertex(apex);
  return std::abs(cross(e1, e2)) / (norm(e1) * norm(e2));
}

namespace {

double split_a1_sq(const NodalField& field, const Band& band, const Triangulation& tri) {
  double sum = 0.0;
  for (int i = 1; i <= band.n(); ++i) {
    const int kt = band.even_elements[static_cast<std::size_t>(i - 1)];
    const Vec2 g0 = element_gradient(tri, band.odd_elements[static_cast<std::size_t>(i - 1)], field);
    const Vec2 g1 = element_gradient(tri, band.odd_elements[static_cast<std::size_t>(i)], field);
    const double jump = dot(g1 - g0, band.direction);
    const double s = tilde_sin(tri, band, i);
    sum += tri.geom(kt).area * jump * jump / (s * s);
  }
  return sum;
}

}  // namespace

BandErrorSplit band_split(const ManufacturedSolution& u, const NodalField& field, const Band& band,
                          const Triangulation& tri) {
  return band_split(u, field, std::vector<Band>{band}, tri);
}

BandErrorSplit band_split(const ManufacturedSolution& u, const NodalField& field, const std::vector<Band>& bands,
                          const Triangulation& tri) {
  double a1_sq = 0.0;
  std::vector<int> tilde;
  for (const Band& b : bands) {
    check_band(tri, b);
    a1_sq += split_a1_sq(field, b, tri);
    tilde.insert(tilde.end(), b.even_elements.begin(), b.even_elements.end());
  }
  BandErrorSplit s;
  s.a1 = std::sqrt(a1_sq);
  s.h1_error_on_tilde = h1_error(u, field, tri, tilde);
  s.a2 = s.h1_error_on_tilde - s.a1;
  return s;
}

NecessaryReport necessary_lhs(const std::vector<Band>& bands, const Triangulation& tri, double alpha, double c_l) {
  NecessaryReport rep;
  rep.alpha = alpha;
  rep.c_l = c_l;
  rep.mesh_size = tri.mesh_size();
  const double root32 = 4.0 * std::sqrt(2.0);
  double agg = 0.0, agg_closed = 0.0;
  for (const Band& b : bands) {
    const BandCheck chk = check_band(tri, b);
    BandNecessary bn;
    bn.n = b.n();
    bn.length = b.length;
    bn.base_h = b.base_h;
    bn.height = b.height;
    bn.alternation_ok = chk.alternation_ok;
    bn.length_threshold = c_l * std::pow(rep.mesh_size, 2.0 * alpha / 5.0);
    if (b.base_h > 0.0 && b.height > 0.0) {
      bn.closed_form = b.base_h * b.base_h * std::sqrt(b.length / b.height) / root32;
    }
    if (bn.n >= 1) {
      double min_sin = std::numeric_limits<double>::infinity(), max_sin = 0.0;
      bn.min_tilde_area = std::numeric_limits<double>::infinity();
      bn.area_ratio_min = std::numeric_limits<double>::infinity();
      for (int i = 1; i <= bn.n; ++i) {
        const double s = tilde_sin(tri, b, i);
        min_sin = std::min(min_sin, s);
        max_sin = std::max(max_sin, s);
        const double at = tri.geom(b.even_elements[static_cast<std::size_t>(i - 1)]).area;
        bn.min_tilde_area = std::min(bn.min_tilde_area, at);
        for (int j : {i - 1, i}) {
          const double ratio = at / tri.geom(b.odd_elements[static_cast<std::size_t>(j)]).area;
          bn.area_ratio_min = std::min(bn.area_ratio_min, ratio);
          bn.area_ratio_max = std::max(bn.area_ratio_max, ratio);
        }
      }
      bn.min_inv_sin = 1.0 / max_sin;
      bn.sin_ratio = max_sin / min_sin;
      bn.value = bn.min_inv_sin * std::sqrt(bn.min_tilde_area) * b.length / std::sqrt(static_cast<double>(bn.n));
      agg += bn.value * bn.value;
      agg_closed += bn.closed_form * bn.closed_form;
    }
    rep.bands.push_back(bn);
  }
  rep.aggregate = std::sqrt(agg);
  rep.aggregate_closed = std::sqrt(agg_closed);
  if (!bands.empty() && bands.front().height > 0.0) {
    const Band& b = bands.front();
    rep.multi_closed_form = b.base_h * b.base_h / b.height * b.length / root32;
  }
  return rep;
}

SufficientReport sufficient_check(const Triangulation& tri, const MeshClassification& cls,
                                  const CorrectionSpec& spec, const std::vector<Cluster>& clusters) {
  SufficientReport rep;
  rep.alpha0 = cls.alpha0;
  rep.t1_count = cls.t1.size();
  rep.t2_count = cls.t2.size();
  for (int k : cls.t1) rep.max_angle_t1 = std::max(rep.max_angle_t1, tri.geom(k).max_angle);
  for (const Bump& b : spec.bumps) (b.kind == BumpKind::Phi ? rep.phi_bumps : rep.psi_bumps) += 1;
  rep.sum_h2 = spec.sum_h2;
  rep.h2_budget = spec.h2_budget;
  rep.min_support_gap = spec.min_support_gap;
  rep.min_vertex_clearance = spec.min_vertex_clearance;
  rep.max_cluster_ratio = spec.max_cluster_ratio;
  rep.min_cluster_separation = spec.min_cluster_separation;
  rep.violations = spec.violations;
  std::vector<char> is_t2(tri.num_triangles(), 0);
  for (int k : cls.t2) is_t2[k] = 1;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& el = clusters[c].elements;
    if (std::none_of(el.begin(), el.end(), [&](int k) { return is_t2[k] != 0; })) {
      rep.clusters_without_t2.push_back(static_cast<int>(c));
    }
  }
  rep.verdict = spec.admissible && rep.max_angle_t1 <= cls.alpha0;
  return rep;
}

IdentityResult three_element_identity_check(const Triplet& t, const Affine& u0, const Affine& u1) {
  using LD = long double;
  struct P {
    LD x, y;
  };
  const P a{t.a.x, t.a.y}, b{t.b.x, t.b.y}, c{t.c.x, t.c.y};
  auto eval = [](const Affine& f, P p) { return static_cast<LD>(f.c) + static_cast<LD>(f.g.x) * p.x + static_cast<LD>(f.g.y) * p.y; };
  const LD abx = a.x - b.x, aby = a.y - b.y, cbx = c.x - b.x, cby = c.y - b.y;
  const LD cr = abx * cby - aby * cbx;
  const LD lab = std::hypot(abx, aby), lcb = std::hypot(cbx, cby);
  if (!(lab > 0) || !(lcb > 0) || std::abs(cr) <= 1e-14L * std::max(lab, lcb) * std::max(lab, lcb)) {
    throw InvalidConfiguration("three_element_identity_check: K~ is degenerate");
  }
  const LD ub0 = eval(u0, b), ub1 = eval(u1, b);
  const LD gscale = std::hypot(static_cast<LD>(u0.g.x), static_cast<LD>(u0.g.y)) +
                    std::hypot(static_cast<LD>(u1.g.x), static_cast<LD>(u1.g.y));
  if (std::abs(ub0 - ub1) > 1e-12L * (1 + std::abs(ub1) + gscale * std::max(lab, lcb))) {
    throw InvalidConfiguration("three_element_identity_check: U0 and U1 disagree at the shared vertex");
  }

  // U~1 - U1 vanishes at B and C and equals U0(A) - U1(A) at A.
  const LD va = eval(u0, a) - eval(u1, a);
  // Gradient of the linear function (va at A, 0 at B, 0 at C): va * perp(C - B) / cross(C-B, A-B).
  const LD denom = cbx * aby - cby * abx;
  const LD gx = va * (-cby) / denom, gy = va * cbx / denom;
  IdentityResult r;
  r.lhs = std::hypot(gx, gy);

  const LD dx = static_cast<LD>(u0.g.x) - u1.g.x, dy = static_cast<LD>(u0.g.y) - u1.g.y;
  const LD dn = std::hypot(dx, dy);
  const LD sin_at = std::abs(cr) / (lab * lcb);
  if (dn == 0) {
    r.rhs = 0;
  } else {
    const LD cos_xi = (dx * abx + dy * aby) / (dn * lab);
    r.rhs = std::abs(cos_xi) / sin_at * dn;
  }
  const LD cos_at = (abx * cbx + aby * cby) / (lab * lcb);
  r.alpha_tilde = static_cast<double>(std::atan2(sin_at, cos_at));
  const LD tol = 1e-10L * std::max({r.lhs, r.rhs, gscale + 1});
  r.holds = std::abs(r.lhs - r.rhs) <= tol;
  return r;
}

RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) throw std::invalid_argument("fit_rate: need two or more levels");
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  RateFit f;
  const double dn = static_cast<double>(n);
  f.rate = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  f.intercept = (sy - f.rate * sx) / dn;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(err[i]) - (f.intercept + f.rate * std::log(h[i]));
    ss += r * r;
  }
  f.residual = std::sqrt(ss / dn);
  return f;
}

}  // namespace degfem
