#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "degfem/interp.hpp"
#include "degfem/mesh.hpp"
#include "degfem/meshgen.hpp"
#include "degfem/quadrature.hpp"
#include "degfem/solution.hpp"

namespace degfem {

class InvalidConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// int_K |grad u - grad|^2 for a constant gradient.
double element_error_sq(const ManufacturedSolution& u, const TriangleGeom& k, Vec2 grad,
                        QuadDegree degree = QuadDegree::Two);

double h1_error(const ManufacturedSolution& u, const NodalField& field, const Triangulation& tri);
double h1_error(const ManufacturedSolution& u, const NodalField& field, const Triangulation& tri,
                const std::vector<int>& subset, QuadDegree degree = QuadDegree::Two);
double h1_error(const ManufacturedSolution& u, const NodalField& field, const Triangulation& tri,
                QuadDegree degree);

/// ||u - field||_{L2(Gamma)} along the given mesh edges.
double l2_boundary_error(const ManufacturedSolution& u, const NodalField& field, const Triangulation& tri,
                         const std::vector<std::array<int, 2>>& edges);

/// ||u_G - P1 u_G||_{L2(0,L)} for u_G(t) = c t^2 + linear.
double proj_p1_residual(double length, double c);

struct BandTrace {
  std::vector<double> interval_lengths;  // h_i
  std::vector<double> slopes;            // U'_i
  std::vector<double> wprime;            // U'_i - secant slope
  double secant_slope = 0.0;
  double weighted_sum = 0.0;             // sum h_i w'_i
  double scale = 0.0;                    // max |w'_i|
  double slope_jumps_sq = 0.0;           // sum_{i>=1} (U'_i - U'_{i-1})^2
  bool balanced = true;                  // |weighted_sum| <= 1e-10 scale L
};

BandTrace band_trace(const Triangulation& tri, const NodalField& field, const Band& band);

struct DifferenceBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// Shifts a to zero h-weighted mean, then compares sum (a_i - a_{i-1})^2 with A / (L N).
DifferenceBound difference_bound_oracle(const std::vector<double>& h, std::vector<double> a);

struct BandErrorSplit {
  double a1 = 0.0;
  double a2 = 0.0;
  double h1_error_on_tilde = 0.0;
};

BandErrorSplit band_split(const ManufacturedSolution& u, const NodalField& field, const Band& band,
                          const Triangulation& tri);
BandErrorSplit band_split(const ManufacturedSolution& u, const NodalField& field, const std::vector<Band>& bands,
                          const Triangulation& tri);

/// sin of the angle of K~_i at its vertex on Gamma (i in 1..N).
double tilde_sin(const Triangulation& tri, const Band& band, int i);

struct BandNecessary {
  int n = 0;
  double length = 0.0;
  double base_h = 0.0;
  double height = 0.0;
  double min_inv_sin = 0.0;
  double min_tilde_area = 0.0;
  double value = 0.0;         // min 1/sin * min|K~|^(1/2) * L * N^(-1/2)
  double closed_form = 0.0;   // h^2 hbar^(-1/2) L^(1/2) / (4 sqrt 2)
  double area_ratio_min = 0.0;  // min |K~_i| / |K_i|
  double area_ratio_max = 0.0;
  double sin_ratio = 0.0;       // max sin / min sin over K~
  double length_threshold = 0.0;  // C_L h^(2 alpha / 5)
  bool alternation_ok = true;
};

struct NecessaryReport {
  std::vector<BandNecessary> bands;
  double aggregate = 0.0;          // (sum_b min sin^-2 min|K~| L_b^2 / N_b)^(1/2)
  double aggregate_closed = 0.0;   // (sum_b closed_form_b^2)^(1/2)
  double multi_closed_form = 0.0;  // h^2 hbar^-1 L / (4 sqrt 2) from the first band
  double alpha = 1.0;
  double c_l = 1.0;
  double mesh_size = 0.0;
};

NecessaryReport necessary_lhs(const std::vector<Band>& bands, const Triangulation& tri, double alpha,
                              double c_l = 1.0);

struct SufficientReport {
  double alpha0 = 0.0;
  double max_angle_t1 = 0.0;
  std::size_t t1_count = 0;
  std::size_t t2_count = 0;
  std::size_t phi_bumps = 0;
  std::size_t psi_bumps = 0;
  double sum_h2 = 0.0;
  double h2_budget = 0.0;
  double min_support_gap = 0.0;
  double min_vertex_clearance = 0.0;
  double max_cluster_ratio = 0.0;
  double min_cluster_separation = 0.0;
  std::vector<Violation> violations;
  std::vector<int> clusters_without_t2;
  bool verdict = false;
};

SufficientReport sufficient_check(const Triangulation& tri, const MeshClassification& cls,
                                  const CorrectionSpec& spec, const std::vector<Cluster>& clusters = {});

/// K~ = (A, B, C): B is the shared vertex on Gamma, A lies on the edge shared with K_0, C on the one shared with K_1.
struct Triplet {
  Point2 a, b, c;
};

struct IdentityResult {
  long double lhs = 0.0L;  // |grad (U~1 - U1)|
  long double rhs = 0.0L;  // |cos xi| / sin(alpha~) |grad (U0 - U1)|
  double alpha_tilde = 0.0;
  bool holds = true;
};

IdentityResult three_element_identity_check(const Triplet& t, const Affine& u0, const Affine& u1);

/// Least-squares slope of log(err) against log(h).
struct RateFit {
  double rate = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square of the log residuals
};

RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace degfem
