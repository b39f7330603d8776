#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <set>
#include <sstream>

#include "degfem/meshgen.hpp"

using namespace degfem;
constexpr double kPi = std::numbers::pi;

namespace {
const std::vector<Point2> kSquare = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
}

TEST(Build, TwoTriangles) {
  const Triangulation t = Triangulation::build(kSquare, {{0, 1, 2}, {0, 2, 3}});
  EXPECT_EQ(t.num_interior_edges(), 1u);
  EXPECT_EQ(t.num_boundary_edges(), 4u);
  EXPECT_EQ(t.num_boundary_vertices(), 4u);
  EXPECT_DOUBLE_EQ(t.total_area(), 1.0);
  EXPECT_NEAR(t.mesh_size(), std::sqrt(2.0), 1e-15);
  ASSERT_TRUE(t.edge_index(0, 2).has_value());
  EXPECT_FALSE(t.edges()[*t.edge_index(2, 0)].boundary());
  EXPECT_FALSE(t.edge_index(1, 3).has_value());
}

TEST(Build, Rejections) {
  // Both triangles use the directed edge 0 -> 1.
  EXPECT_THROW(Triangulation::build(kSquare, {{0, 1, 2}, {0, 1, 3}}), NonConforming);
  EXPECT_THROW(Triangulation::build(kSquare, {{0, 2, 1}, {0, 3, 2}}), InvertedElement);
  EXPECT_THROW(Triangulation::build({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {1, 1}}, {{0, 1, 2}, {0, 4, 3}}), DuplicateVertex);
  // Hole: one triangle only covers half the box.
  EXPECT_THROW(Triangulation::build(kSquare, {{0, 1, 2}}), MeshError);
  EXPECT_THROW(Triangulation::build(kSquare, {{0, 1, 7}}), MeshError);
}

TEST(Build, BabuskaAzizIsValid) {
  const RowMesh ba = babuska_aziz(8, 64);
  double area = 0.0;
  for (const TriangleGeom& g : ba.mesh.geoms()) area += g.area;
  EXPECT_NEAR(area, 1.0, 1e-10);
}

TEST(Classify, Thresholds) {
  const Triangulation t = unit_square_uniform(6);
  EXPECT_TRUE(classify(t, 0.51 * kPi).t2.empty());
  EXPECT_EQ(classify(t, 0.51 * kPi).t1.size(), t.num_triangles());
  EXPECT_EQ(classify(t, kPi / 3 + 1e-9).t2.size(), t.num_triangles());
  EXPECT_THROW(classify(t, kPi / 3), std::invalid_argument);
  EXPECT_THROW(classify(t, kPi), std::invalid_argument);
}

TEST(Classify, Monotone) {
  const RowMesh ba = babuska_aziz(8, 40);
  std::size_t prev = ba.mesh.num_triangles() + 1;
  for (double a : {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95}) {
    const MeshClassification c = classify(ba.mesh, a * kPi);
    EXPECT_LE(c.t2.size(), prev);
    EXPECT_EQ(c.t1.size() + c.t2.size(), ba.mesh.num_triangles());
    prev = c.t2.size();
  }
}

TEST(Classify, SingleBandStrip) {
  const double h = 1.0 / 16;
  const SingleBandMesh sb = single_band_mesh(16, h * h * h);
  const MeshClassification c = classify(sb.mesh, 0.9 * kPi);
  const std::set<int> strip(sb.strip_elements.begin(), sb.strip_elements.end());
  const std::set<int> t2(c.t2.begin(), c.t2.end());
  for (int k : c.t2) EXPECT_TRUE(strip.count(k));
  for (int k : sb.band.odd_elements) EXPECT_TRUE(t2.count(k));
  for (int k : sb.band.even_elements) EXPECT_TRUE(t2.count(k));
}

TEST(MeshIo, RoundTripIsExact) {
  const SingleBandMesh sb = single_band_mesh(8, 1.0 / 3000);
  std::ostringstream a;
  write_mesh(a, sb.mesh);
  std::istringstream in(a.str());
  const Triangulation back = read_mesh(in);
  std::ostringstream b;
  write_mesh(b, back);
  EXPECT_EQ(a.str(), b.str());
  ASSERT_EQ(back.num_vertices(), sb.mesh.num_vertices());
  for (std::size_t v = 0; v < back.num_vertices(); ++v) EXPECT_EQ(back.vertices()[v], sb.mesh.vertices()[v]);
  EXPECT_EQ(back.triangles(), sb.mesh.triangles());
}

TEST(MeshIo, Format) {
  const Triangulation t = Triangulation::build(kSquare, {{0, 1, 2}, {0, 2, 3}});
  std::ostringstream os;
  write_mesh(os, t);
  EXPECT_EQ(os.str(), "4 2\n0 0\n1 0\n1 1\n0 1\n0 1 2\n0 2 3\n");
  EXPECT_EQ(format_shortest(0.1), "0.1");
  std::istringstream bad("3 1\n0 0\n1 0\n");
  EXPECT_THROW(read_mesh(bad), std::exception);
}
