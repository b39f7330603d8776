#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "degfem/geometry.hpp"

namespace degfem {

/// Exact solution of -Lap u = f used to drive solves and error measurements.
struct ManufacturedSolution {
  std::string name;
  std::function<double(Point2)> u;
  std::function<Vec2(Point2)> grad;
  std::function<double(Point2)> f;
  double seminorm_2inf = 0.0;           // max over x and (i,j) of |d_i d_j u|
  std::optional<double> seminorm_2;     // |u|_2 on the unit square when known
  int polynomial_degree = -1;           // -1 if not a polynomial
};

/// u = a x^2 + b xy + c y^2 + d x + e y + g.
ManufacturedSolution quadratic_solution(double a, double b, double c, double d = 0.0,
                                        double e = 0.0, double g = 0.0);

/// The test solution u = x^2 + y^2, f = -4.
ManufacturedSolution paraboloid();

ManufacturedSolution linear_solution(double a, double b, double c);

/// u = sin(pi x) sin(pi y).
ManufacturedSolution sine_solution();

/// Lookup by name: paraboloid (alias quadratic), sine, linear.
ManufacturedSolution named_solution(const std::string& name);

/// Affine function c + g.x.
struct Affine {
  double c = 0.0;
  Vec2 g{};
  double operator()(Point2 p) const { return c + g.x * p.x + g.y * p.y; }
  /// The affine function through three non-collinear points with given values.
  static Affine through(const std::array<Point2, 3>& p, const std::array<double, 3>& v);
};

class Triangulation;

/// Continuous P1 function: one value per mesh vertex.
struct NodalField {
  std::vector<double> values;
};

/// Constant gradient of the P1 field on element k.
Vec2 element_gradient(const Triangulation& tri, int k, const NodalField& field);
Vec2 element_gradient(const std::array<Point2, 3>& p, const std::array<double, 3>& v);

}  // namespace degfem
