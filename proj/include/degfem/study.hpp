#pragma once

#include <optional>
#include <string>
#include <vector>

#include "degfem/analysis.hpp"
#include "degfem/io.hpp"

namespace degfem {

enum class Family { Uniform, SingleBand, BabuskaAziz, SubdividedBand, Cluster };

/// Accepts uniform, single_band|band, babuska_aziz|ba, subdivided_band|subdivided, cluster.
Family parse_family(const std::string& name);
std::string family_name(Family f);

struct StudyConfig {
  Family family = Family::Uniform;
  std::vector<int> levels;     // nx per level, h = 1/nx, strictly increasing
  std::optional<double> beta;  // hbar = h^beta; family default if unset
  double alpha = 1.0;          // target order for the necessary condition
  double c_l = 1.0;
  double alpha0 = 0.0;         // T1/T2 threshold; 0 means 0.9 pi
  std::string solution = "paraboloid";
  CorrectionOptions correction;

  double effective_beta() const;
  double effective_alpha0() const;
  void validate() const;  // throws InvalidConfiguration
};

std::vector<int> default_levels(Family f);

struct StudyRow {
  int nx = 0;
  int ny = 0;  // rows for babuska_aziz, rows_in_block for cluster
  double h = 0.0;
  double hbar = 0.0;  // nan for uniform
  std::size_t dofs = 0;
  std::size_t elements = 0;
  double h1_error = 0.0;
  double h1_error_band = 0.0;
  double l2_gamma = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double nec_lhs = 0.0;
  double rate_running = 0.0;

  double interp_error = 0.0;     // Lagrange interpolant
  double corrected_error = 0.0;  // nan when no correction was built
  double residual = 0.0;
  std::string method;
  Json extra;  // family specific reports
};

struct StudyResult {
  StudyConfig config;
  std::vector<StudyRow> rows;
  RateFit fit;
  std::optional<RateFit> corrected_fit;
};

StudyResult run_study(const StudyConfig& config, const SolveOptions& solve_options = {});

std::string study_csv(const StudyResult& r);
Json study_json(const StudyResult& r);

/// Mesh edges with both end points on y, ordered by x.
std::vector<std::array<int, 2>> horizontal_edges(const Triangulation& tri, double y);

}  // namespace degfem
