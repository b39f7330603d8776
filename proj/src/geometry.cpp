#include "degfem/geometry.hpp"

#include <algorithm>

namespace degfem {

double angle_between(Vec2 a, Vec2 b) {
  if ((a.x == 0.0 && a.y == 0.0) || (b.x == 0.0 && b.y == 0.0)) {
    throw ZeroVector("angle_between: zero-length vector");
  }
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

TriangleGeom tri_metrics(Point2 p0, Point2 p1, Point2 p2) {
  TriangleGeom g;
  g.vertices = {p0, p1, p2};

  // Edge i is opposite vertex i.
  const std::array<double, 3> len = {distance(p1, p2), distance(p2, p0), distance(p0, p1)};
  const std::array<double, 3> len2 = {dot(p2 - p1, p2 - p1), dot(p0 - p2, p0 - p2),
                                      dot(p1 - p0, p1 - p0)};
  int longest = 0;
  for (int i = 1; i < 3; ++i) {
    if (len2[i] > len2[longest]) longest = i;
  }
  g.diameter = len[longest];

  const double signed_area = 0.5 * cross(p1 - p0, p2 - p0);
  if (!(std::abs(signed_area) > kCollinearTolerance * g.diameter * g.diameter)) {
    throw DegenerateTriangle("tri_metrics: vertices are collinear within tolerance");
  }
  g.area = std::abs(signed_area);

  for (int i = 0; i < 3; ++i) {
    const Point2 p = g.vertices[i];
    const Vec2 e1 = g.vertices[(i + 1) % 3] - p;
    const Vec2 e2 = g.vertices[(i + 2) % 3] - p;
    g.angles[i] = std::atan2(std::abs(cross(e1, e2)), dot(e1, e2));
  }
  // The largest angle sits opposite the longest edge; ties keep the lowest index.
  g.max_angle_vertex = longest;
  g.max_angle = g.angles[longest];

  g.circumradius = len[0] * len[1] * len[2] / (4.0 * g.area);
  return g;
}

Point2 altitude_foot(Point2 apex, Point2 b, Point2 c) {
  const Vec2 e = c - b;
  const double ee = dot(e, e);
  if (ee == 0.0) throw ZeroVector("altitude_foot: coincident base points");
  const double t = dot(apex - b, e) / ee;
  return b + t * e;
}

AltitudeFrame altitude_frame(const TriangleGeom& g) {
  const Point2 a = g.a();
  const Point2 b = g.b();
  const Point2 c = g.c();
  AltitudeFrame f;
  const Vec2 e = c - b;
  const double len = norm(e);
  f.v1 = (1.0 / len) * e;
  f.foot = b + dot(a - b, f.v1) * f.v1;
  f.v2 = perp(f.v1);
  if (dot(a - f.foot, f.v2) < 0.0) f.v2 = -1.0 * f.v2;
  return f;
}

}  // namespace degfem
