#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "degfem/mesh.hpp"
#include "degfem/solution.hpp"

namespace degfem {

class SolverBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class BoundaryMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Interior system after eliminating the Dirichlet vertices.
struct LinearSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<double> dirichlet;   // full length; interior entries are 0
  std::vector<int> dof_of_vertex;  // -1 on the boundary
  std::vector<int> vertex_of_dof;
};

/// Full P1 stiffness matrix over all vertices.
SparseMatrix stiffness_matrix(const Triangulation& tri);

LinearSystem assemble(const Triangulation& tri, const ManufacturedSolution& u);

struct SolveOptions {
  double target_residual = 1e-12;
  int max_refinements = 4;
  long max_cg_iterations = 1000000;
  bool force_iterative = false;
};

struct SolveResult {
  NodalField field;
  double relative_residual = 0.0;
  std::string method;  // "ldlt" or "pcg"
  int refinements = 0;
  long iterations = 0;
};

SolveResult solve(const LinearSystem& sys, const SolveOptions& options = {});

struct CeaReport {
  double error = 0.0;                    // |u - U|_1
  std::vector<double> candidate_errors;  // |u - v|_1
  bool holds = true;
};

/// |u-U|_1 <= |u-v|_1 (1 + 1e-9) + 1e-12 scale for every candidate sharing U's boundary values.
CeaReport cea_check(const ManufacturedSolution& u, const Triangulation& tri, const NodalField& U,
                    const std::vector<NodalField>& candidates);

/// a(u - U, v) = sum_K int_K (grad u - grad U) . grad v, exact for quadratic u.
double galerkin_residual(const ManufacturedSolution& u, const Triangulation& tri, const NodalField& U,
                         const NodalField& v);

/// |v|_1 of a P1 field.
double p1_seminorm(const Triangulation& tri, const NodalField& v);

}  // namespace degfem
