#include "degfem/fem.hpp"

#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "degfem/analysis.hpp"
#include "degfem/quadrature.hpp"

namespace degfem {

namespace {

// Gradients of the barycentric coordinates of a CCW triangle.
std::array<Vec2, 3> hat_gradients(const Triangulation& tri, int k) {
  const Triangle& t = tri.triangle(k);
  const std::array<Point2, 3> p = {tri.vertex(t[0]), tri.vertex(t[1]), tri.vertex(t[2])};
  const double twice_area = cross(p[1] - p[0], p[2] - p[0]);
  std::array<Vec2, 3> g;
  for (int i = 0; i < 3; ++i) g[i] = (1.0 / twice_area) * perp(p[(i + 2) % 3] - p[(i + 1) % 3]);
  return g;
}

double relative_residual(const SparseMatrix& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double bn = b.norm();
  const double rn = (b - a.selfadjointView<Eigen::Lower>() * x).norm();
  return bn > 0.0 ? rn / bn : rn;
}

}  // namespace

SparseMatrix stiffness_matrix(const Triangulation& tri) {
  const int nv = static_cast<int>(tri.num_vertices());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * tri.num_triangles());
  for (int k = 0; k < static_cast<int>(tri.num_triangles()); ++k) {
    const auto g = hat_gradients(tri, k);
    const double area = tri.geom(k).area;
    const Triangle& t = tri.triangle(k);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) trip.emplace_back(t[a], t[b], area * dot(g[a], g[b]));
    }
  }
  SparseMatrix m(nv, nv);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

LinearSystem assemble(const Triangulation& tri, const ManufacturedSolution& u) {
  LinearSystem sys;
  const int nv = static_cast<int>(tri.num_vertices());
  sys.dof_of_vertex.assign(static_cast<std::size_t>(nv), -1);
  sys.dirichlet.assign(static_cast<std::size_t>(nv), 0.0);
  for (int v = 0; v < nv; ++v) {
    if (tri.is_boundary_vertex(v)) {
      sys.dirichlet[v] = u.u(tri.vertex(v));
    } else {
      sys.dof_of_vertex[v] = static_cast<int>(sys.vertex_of_dof.size());
      sys.vertex_of_dof.push_back(v);
    }
  }
  const int n = static_cast<int>(sys.vertex_of_dof.size());
  sys.rhs = Eigen::VectorXd::Zero(n);

  // Lower triangle only; the solver reads the self-adjoint view.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(6 * tri.num_triangles());
  for (int k = 0; k < static_cast<int>(tri.num_triangles()); ++k) {
    const auto g = hat_gradients(tri, k);
    const double area = tri.geom(k).area;
    const Triangle& t = tri.triangle(k);
    const std::array<Point2, 3> p = {tri.vertex(t[0]), tri.vertex(t[1]), tri.vertex(t[2])};
    // Midpoint rule: the hat of vertex a is 1/2 at the two midpoints on its edges.
    const std::array<double, 3> fm = {u.f(0.5 * (p[1] + p[2])), u.f(0.5 * (p[2] + p[0])), u.f(0.5 * (p[0] + p[1]))};
    for (int a = 0; a < 3; ++a) {
      const int da = sys.dof_of_vertex[t[a]];
      if (da < 0) continue;
      sys.rhs[da] += area / 3.0 * 0.5 * (fm[(a + 1) % 3] + fm[(a + 2) % 3]);
      for (int b = 0; b < 3; ++b) {
        const double kab = area * dot(g[a], g[b]);
        const int db = sys.dof_of_vertex[t[b]];
        if (db < 0) {
          sys.rhs[da] -= kab * sys.dirichlet[t[b]];
        } else if (db <= da) {
          trip.emplace_back(da, db, kab);
        }
      }
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

SolveResult solve(const LinearSystem& sys, const SolveOptions& options) {
  SolveResult res;
  const SparseMatrix& a = sys.matrix;
  const Eigen::VectorXd& b = sys.rhs;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());

  bool done = b.size() == 0;
  if (!done && !options.force_iterative) {
    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower> ldlt(a);
    if (ldlt.info() == Eigen::Success) {
      x = ldlt.solve(b);
      res.method = "ldlt";
      res.relative_residual = relative_residual(a, x, b);
      while (res.relative_residual > options.target_residual && res.refinements < options.max_refinements) {
        const Eigen::VectorXd r = b - a.selfadjointView<Eigen::Lower>() * x;
        x += ldlt.solve(r);
        ++res.refinements;
        res.relative_residual = relative_residual(a, x, b);
      }
      done = ldlt.info() == Eigen::Success && res.relative_residual <= options.target_residual;
    }
  }
  if (!done && b.size() > 0) {
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    SparseMatrix full = a.selfadjointView<Eigen::Lower>();
    cg.compute(full);
    cg.setMaxIterations(options.max_cg_iterations);
    cg.setTolerance(0.1 * options.target_residual);
    x = cg.solveWithGuess(b, x);
    res.method = "pcg";
    res.iterations = cg.iterations();
    res.relative_residual = relative_residual(a, x, b);
    if (!(res.relative_residual <= options.target_residual)) {
      throw SolverBreakdown("residual " + std::to_string(res.relative_residual) + " above target after " +
                            std::to_string(res.iterations) + " CG iterations");
    }
  }

  res.field.values = sys.dirichlet;
  for (std::size_t d = 0; d < sys.vertex_of_dof.size(); ++d) res.field.values[sys.vertex_of_dof[d]] = x[static_cast<Eigen::Index>(d)];
  return res;
}

CeaReport cea_check(const ManufacturedSolution& u, const Triangulation& tri, const NodalField& U,
                    const std::vector<NodalField>& candidates) {
  const std::size_t nv = tri.num_vertices();
  double scale = 0.0;
  for (std::size_t v = 0; v < nv; ++v) scale = std::max(scale, std::abs(U.values[v]));
  for (const NodalField& c : candidates) {
    if (c.values.size() != nv) throw BoundaryMismatch("candidate has the wrong length");
    for (std::size_t v = 0; v < nv; ++v) {
      if (tri.is_boundary_vertex(static_cast<int>(v)) &&
          std::abs(c.values[v] - U.values[v]) > 1e-14 * (1.0 + scale)) {
        throw BoundaryMismatch("candidate differs from U at boundary vertex " + std::to_string(v));
      }
    }
  }
  CeaReport rep;
  rep.error = h1_error(u, U, tri);
  const double floor = 1e-12 * std::max(1.0, scale);
  for (const NodalField& c : candidates) {
    const double e = h1_error(u, c, tri);
    rep.candidate_errors.push_back(e);
    if (rep.error > e * (1.0 + 1e-9) + floor) rep.holds = false;
  }
  return rep;
}

double galerkin_residual(const ManufacturedSolution& u, const Triangulation& tri, const NodalField& U,
                         const NodalField& v) {
  double sum = 0.0;
  const auto rule = edge_midpoint_rule();
  for (int k = 0; k < static_cast<int>(tri.num_triangles()); ++k) {
    const Vec2 gu = element_gradient(tri, k, U);
    const Vec2 gv = element_gradient(tri, k, v);
    const TriangleGeom& g = tri.geom(k);
    double local = 0.0;
    for (const TriQuadPoint& q : rule) local += q.weight * dot(u.grad(bary_point(g.vertices, q.bary)) - gu, gv);
    sum += g.area * local;
  }
  return sum;
}

double p1_seminorm(const Triangulation& tri, const NodalField& v) {
  double sum = 0.0;
  for (int k = 0; k < static_cast<int>(tri.num_triangles()); ++k) {
    const Vec2 g = element_gradient(tri, k, v);
    sum += tri.geom(k).area * dot(g, g);
  }
  return std::sqrt(sum);
}

}  // namespace degfem
