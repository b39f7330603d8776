#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "degfem/mesh.hpp"
#include "degfem/solution.hpp"

namespace degfem {

class NonpositiveRadius : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class InconsistentClassification : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class InadmissibleCorrection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BumpValue {
  double value = 0.0;
  Vec2 grad{};
};

/// Cubic bump: 1 at the centre, zero with zero slope at |x| = r.
BumpValue eval_phi(double r, Vec2 x);
/// Table mountain: 1 on |x| <= r, cubic blend to 0 at |x| = 2r.
BumpValue eval_psi(double r, Vec2 x);

NodalField lagrange(const ManufacturedSolution& u, const Triangulation& tri);

/// Linear v on K with v = u at B_K, C_K and the normal slope of u at the altitude foot.
struct ModifiedInterp {
  Affine v;
  std::array<double, 3> values{};  // v at A_K, B_K, C_K
  double delta = 0.0;               // v(A_K) - u(A_K)
  AltitudeFrame frame;
};

ModifiedInterp modified_element_interp(const ManufacturedSolution& u, const TriangleGeom& k);

Affine tangent_plane(const ManufacturedSolution& u, Point2 xc);

enum class BumpKind { Phi, Psi };

struct Bump {
  BumpKind kind = BumpKind::Phi;
  Point2 center;
  double radius = 0.0;
  double amplitude = 0.0;  // phi: delta_K
  Affine plane;            // psi: tangent plane at the centre
  int owner = -1;          // element (phi) or cluster index (psi)

  double support_radius() const { return kind == BumpKind::Phi ? radius : 2.0 * radius; }
};

struct Cluster {
  std::vector<int> elements;
};

struct Violation {
  char condition = '?';  // a..e
  std::string detail;
  std::vector<int> offenders;
};

struct CorrectionOptions {
  double h2_budget = -1.0;        // <= 0 means 4 |Omega|
  double cluster_constant = 2.0;  // c in r_C <= c h^(1/2)
};

struct CorrectionSpec {
  std::vector<Bump> bumps;
  bool admissible = true;
  std::vector<Violation> violations;

  double mesh_size = 0.0;
  double sum_h2 = 0.0;             // over T2 elements outside clusters
  double h2_budget = 0.0;
  double min_support_gap = 0.0;    // min centre distance minus outer radii; +inf if < 2 bumps
  double min_vertex_clearance = 0.0;  // min |P - A_K| / r_K over foreign T2 B/C vertices
  double max_cluster_ratio = 0.0;  // max r_C / h^(1/2)
  double min_cluster_separation = 0.0;  // min dist / (2 (r_i + r_j))
  double cluster_constant = 0.0;
};

CorrectionSpec build_correction(const ManufacturedSolution& u, const Triangulation& tri,
                                const MeshClassification& cls, const std::vector<Cluster>& clusters = {},
                                const CorrectionOptions& options = {});

/// Nodal values of u + w.
NodalField corrected_interpolant(const ManufacturedSolution& u, const Triangulation& tri,
                                 const CorrectionSpec& spec);

/// w and its gradient at x.
BumpValue eval_correction(const ManufacturedSolution& u, const CorrectionSpec& spec, Point2 x);

}  // namespace degfem
