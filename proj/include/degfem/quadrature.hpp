#pragma once

#include <array>
#include <span>

#include "degfem/geometry.hpp"

namespace degfem {

/// Barycentric point with weight normalised so the weights sum to 1 (multiply by |K|).
struct TriQuadPoint {
  std::array<double, 3> bary;
  double weight;
};

/// 1D point on [0,1], weights sum to 1.
struct LineQuadPoint {
  double t;
  double weight;
};

enum class QuadDegree { Two = 2, Five = 5 };

/// Edge midpoints, equal weights; exact to degree 2.
std::span<const TriQuadPoint> edge_midpoint_rule();

/// Radon's 7-point rule; exact to degree 5.
std::span<const TriQuadPoint> radon7_rule();

std::span<const TriQuadPoint> triangle_rule(QuadDegree degree);

/// 3-point Gauss-Legendre on [0,1]; exact to degree 5.
std::span<const LineQuadPoint> gauss3_rule();

inline Point2 bary_point(const std::array<Point2, 3>& v, const std::array<double, 3>& l) {
  return {l[0] * v[0].x + l[1] * v[1].x + l[2] * v[2].x, l[0] * v[0].y + l[1] * v[1].y + l[2] * v[2].y};
}

}  // namespace degfem
