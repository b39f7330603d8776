#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "degfem/geometry.hpp"

using namespace degfem;
constexpr double kPi = std::numbers::pi;

TEST(TriMetrics, Equilateral) {
  const TriangleGeom g = tri_metrics({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2});
  EXPECT_NEAR(g.max_angle, kPi / 3, 1e-15);
  EXPECT_NEAR(g.circumradius, 1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(g.area, std::sqrt(3.0) / 4, 1e-15);
}

TEST(TriMetrics, RightIsosceles) {
  const TriangleGeom g = tri_metrics({0, 0}, {1, 0}, {0, 1});
  EXPECT_NEAR(g.max_angle, kPi / 2, 1e-15);
  EXPECT_EQ(g.max_angle_vertex, 0);
  EXPECT_NEAR(g.circumradius, std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(g.diameter, std::sqrt(2.0), 1e-15);
}

TEST(TriMetrics, ThinBandElement) {
  // Half apex angle has tan = 0.05 / 0.01 = 5, so sin(pi - alpha) = 2*5 / (1 + 25).
  const TriangleGeom g = tri_metrics({0, 0}, {0.1, 0}, {0.05, 0.01});
  const double s = std::sin(kPi - g.max_angle);
  EXPECT_NEAR(s, 10.0 / 26.0, 1e-14);
  EXPECT_NEAR(1 / s, 2.6, 1e-13);
  EXPECT_GT(1 / s, 0.1 / (4 * 0.01));
  EXPECT_EQ(g.a(), (Point2{0.05, 0.01}));
  EXPECT_EQ(g.b(), (Point2{0, 0}));
  EXPECT_EQ(g.c(), (Point2{0.1, 0}));
}

TEST(TriMetrics, RejectsCollinear) {
  EXPECT_THROW(tri_metrics({0, 0}, {1, 0}, {2, 0}), DegenerateTriangle);
  EXPECT_THROW(tri_metrics({0, 0}, {1, 0}, {0.5, 1e-16}), DegenerateTriangle);
  EXPECT_NO_THROW(tri_metrics({0, 0}, {1, 0}, {0.5, 1e-12}));
}

TEST(TriMetrics, NearlyFlatAngleIsAccurate) {
  // Apex angle pi - 2 atan(2e-9) is resolved through atan2 to one ulp of pi; acos would lose half the digits.
  const TriangleGeom g = tri_metrics({0, 0}, {1, 0}, {0.5, 1e-9});
  EXPECT_NEAR(kPi - g.max_angle, 2 * std::atan(2e-9), 4.5e-16);
  EXPECT_NEAR(g.angles[0], std::atan(2e-9), 1e-24);
}

TEST(TriMetrics, LawOfSinesAndInvariance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point2 p{d(rng), d(rng)}, q{d(rng), d(rng)}, r{d(rng), d(rng)};
    if (std::abs(cross(q - p, r - p)) < 1e-6) continue;
    const TriangleGeom g = tri_metrics(p, q, r);
    EXPECT_NEAR(g.diameter, 2 * g.circumradius * std::sin(g.max_angle), 1e-12 * g.diameter);
    EXPECT_NEAR(g.angles[0] + g.angles[1] + g.angles[2], kPi, 1e-13);
    // Permuted and moved copies.
    const double t = d(rng) * kPi;
    auto mv = [&](Point2 x) { return Point2{std::cos(t) * x.x - std::sin(t) * x.y + 3, std::sin(t) * x.x + std::cos(t) * x.y - 2}; };
    const TriangleGeom h = tri_metrics(mv(r), mv(p), mv(q));
    EXPECT_NEAR(h.max_angle, g.max_angle, 1e-12 * g.max_angle);
    EXPECT_NEAR(h.area, g.area, 1e-12 * g.area);
    EXPECT_NEAR(h.circumradius, g.circumradius, 1e-12 * g.circumradius);
  }
}

TEST(AltitudeFrame, IsoscelesFoot) {
  const AltitudeFrame f = altitude_frame(tri_metrics({0, 0}, {1, 0}, {0.5, 0.01}));
  EXPECT_NEAR(f.foot.x, 0.5, 1e-15);
  EXPECT_NEAR(f.foot.y, 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f.v1.x), 1.0, 1e-15);
  EXPECT_NEAR(f.v2.y, 1.0, 1e-15);
}

TEST(AltitudeFrame, RightAngleVertex) {
  // The right angle sits at the origin, so the foot is the hypotenuse midpoint.
  const AltitudeFrame f = altitude_frame(tri_metrics({0, 1}, {0, 0}, {1, 0}));
  EXPECT_NEAR(f.foot.x, 0.5, 1e-15);
  EXPECT_NEAR(f.foot.y, 0.5, 1e-15);
  // The literal projection of (0,1) onto the line through (0,0), (1,0).
  const Point2 p = altitude_foot({0, 1}, {0, 0}, {1, 0});
  EXPECT_EQ(p, (Point2{0, 0}));
}

TEST(AltitudeFrame, Orthogonality) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point2 p{d(rng), d(rng)}, q{d(rng), d(rng)}, r{d(rng), d(rng)};
    if (std::abs(cross(q - p, r - p)) < 1e-6) continue;
    const TriangleGeom g = tri_metrics(p, q, r);
    const AltitudeFrame f = altitude_frame(g);
    EXPECT_NEAR(dot(f.foot - g.a(), f.v1), 0.0, 1e-12);
    EXPECT_NEAR(norm(f.v1), 1.0, 1e-15);
    EXPECT_NEAR(dot(f.v1, f.v2), 0.0, 1e-15);
    EXPECT_GT(dot(g.a() - f.foot, f.v2), 0.0);
  }
}

TEST(AngleBetween, Examples) {
  EXPECT_NEAR(angle_between({1, 0}, {0, 1}), kPi / 2, 1e-15);
  EXPECT_EQ(angle_between({1, 0}, {1, 0}), 0.0);
  EXPECT_NEAR(angle_between({1, 0}, {-1, 1}), 3 * kPi / 4, 1e-15);
  EXPECT_THROW(angle_between({0, 0}, {1, 0}), ZeroVector);
}
