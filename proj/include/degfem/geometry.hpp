#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace degfem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

// Points and displacement vectors share one representation.
using Vec2 = Point2;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

class DegenerateTriangle : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ZeroVector : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Metric data of one triangle.
///
/// `vertices` keeps the caller's order. The maximum-angle vertex A_K is
/// `vertices[max_angle_vertex]`; B_K and C_K follow it cyclically, so
/// (A, B, C) has the same orientation as the input.
struct TriangleGeom {
  std::array<Point2, 3> vertices{};
  std::array<double, 3> angles{};  // interior angle at each vertex
  double area = 0.0;
  double diameter = 0.0;  // longest edge h_K
  double max_angle = 0.0;
  int max_angle_vertex = 0;
  double circumradius = 0.0;

  Point2 a() const { return vertices[max_angle_vertex]; }
  Point2 b() const { return vertices[(max_angle_vertex + 1) % 3]; }
  Point2 c() const { return vertices[(max_angle_vertex + 2) % 3]; }
};

/// Signed area is rejected when |area| <= kCollinearTolerance * diameter^2.
inline constexpr double kCollinearTolerance = 1e-14;

TriangleGeom tri_metrics(Point2 p0, Point2 p1, Point2 p2);

struct AltitudeFrame {
  Point2 foot;  // x_K
  Vec2 v1;      // unit, along C_K - B_K
  Vec2 v2;      // unit, orthogonal to v1, pointing from x_K toward A_K
};

AltitudeFrame altitude_frame(const TriangleGeom& g);

/// Orthogonal projection of `apex` onto the line through `b` and `c`.
Point2 altitude_foot(Point2 apex, Point2 b, Point2 c);

/// Angle in [0, pi] between two nonzero vectors, computed with atan2.
double angle_between(Vec2 a, Vec2 b);

}  // namespace degfem
