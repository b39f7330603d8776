#include "degfem/solution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "degfem/mesh.hpp"

namespace degfem {

ManufacturedSolution quadratic_solution(double a, double b, double c, double d, double e, double g) {
  ManufacturedSolution s;
  s.name = "quadratic";
  s.u = [=](Point2 p) { return a * p.x * p.x + b * p.x * p.y + c * p.y * p.y + d * p.x + e * p.y + g; };
  s.grad = [=](Point2 p) { return Vec2{2.0 * a * p.x + b * p.y + d, b * p.x + 2.0 * c * p.y + e}; };
  s.f = [=](Point2) { return -2.0 * (a + c); };
  s.seminorm_2inf = std::max({std::abs(2.0 * a), std::abs(b), std::abs(2.0 * c)});
  // Hessian is constant; the unit square has area 1.
  s.seminorm_2 = std::sqrt(4.0 * a * a + 2.0 * b * b + 4.0 * c * c);
  s.polynomial_degree = (a != 0.0 || b != 0.0 || c != 0.0) ? 2 : 1;
  return s;
}

ManufacturedSolution paraboloid() {
  ManufacturedSolution s = quadratic_solution(1.0, 0.0, 1.0);
  s.name = "paraboloid";
  return s;
}

ManufacturedSolution linear_solution(double a, double b, double c) {
  ManufacturedSolution s = quadratic_solution(0.0, 0.0, 0.0, a, b, c);
  s.name = "linear";
  s.seminorm_2inf = 0.0;
  s.seminorm_2 = 0.0;
  s.polynomial_degree = 1;
  return s;
}

ManufacturedSolution sine_solution() {
  constexpr double pi = std::numbers::pi;
  ManufacturedSolution s;
  s.name = "sine";
  s.u = [](Point2 p) { return std::sin(pi * p.x) * std::sin(pi * p.y); };
  s.grad = [](Point2 p) {
    return Vec2{pi * std::cos(pi * p.x) * std::sin(pi * p.y), pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
  };
  s.f = [](Point2 p) { return 2.0 * pi * pi * std::sin(pi * p.x) * std::sin(pi * p.y); };
  s.seminorm_2inf = pi * pi;
  s.seminorm_2 = pi * pi;
  return s;
}

ManufacturedSolution named_solution(const std::string& name) {
  if (name == "paraboloid" || name == "quadratic") return paraboloid();
  if (name == "sine") return sine_solution();
  if (name == "linear") return linear_solution(1.0, -2.0, 0.5);
  throw std::invalid_argument("unknown solution '" + name + "'");
}

Vec2 element_gradient(const std::array<Point2, 3>& p, const std::array<double, 3>& v) {
  const double twice_area = cross(p[1] - p[0], p[2] - p[0]);
  Vec2 g{};
  for (int i = 0; i < 3; ++i) {
    // grad of the i-th barycentric coordinate is perp(opposite edge) / (2|K|), signed.
    const Vec2 e = p[(i + 2) % 3] - p[(i + 1) % 3];
    g = g + (v[i] / twice_area) * perp(e);
  }
  return g;
}

Vec2 element_gradient(const Triangulation& tri, int k, const NodalField& field) {
  const Triangle& t = tri.triangle(k);
  return element_gradient({tri.vertex(t[0]), tri.vertex(t[1]), tri.vertex(t[2])},
                          {field.values[t[0]], field.values[t[1]], field.values[t[2]]});
}

Affine Affine::through(const std::array<Point2, 3>& p, const std::array<double, 3>& v) {
  Affine a;
  a.g = element_gradient(p, v);
  // Fix the constant through the centroid value.
  a.c = (v[0] + v[1] + v[2]) / 3.0 -
        dot(a.g, Point2{(p[0].x + p[1].x + p[2].x) / 3.0, (p[0].y + p[1].y + p[2].y) / 3.0});
  return a;
}

}  // namespace degfem
