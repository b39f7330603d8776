#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "degfem/analysis.hpp"
#include "degfem/meshgen.hpp"

using namespace degfem;
constexpr double kPi = std::numbers::pi;

TEST(Uniform, Counts) {
  EXPECT_EQ(unit_square_uniform(1).num_triangles(), 2u);
  const Triangulation t = unit_square_uniform(4);
  EXPECT_EQ(t.num_triangles(), 32u);
  EXPECT_EQ(t.num_vertices(), 25u);
  for (int n : {1, 3, 7}) EXPECT_TRUE(classify(unit_square_uniform(n), 0.51 * kPi).t2.empty());
  EXPECT_THROW(unit_square_uniform(0), std::invalid_argument);
}

TEST(RowMesh, SmallestInstance) {
  const RowMesh rm = row_mesh({{0.0, 0.5, 1.0}, {0, 1, 0}}, 0.5);
  int isosceles = 0;
  for (const TriangleGeom& g : rm.mesh.geoms()) {
    // Base 0.5, height 0.5: apex angle 2 atan(1/2), base angles atan(2).
    int apex = 0, base = 0;
    for (double a : g.angles) {
      apex += std::abs(a - 2 * std::atan(0.5)) < 1e-14;
      base += std::abs(a - std::atan(2.0)) < 1e-14;
    }
    if (std::abs(g.area - 0.125) < 1e-15 && apex == 1 && base == 2) ++isosceles;
  }
  EXPECT_GT(isosceles, 0);
  EXPECT_EQ(rm.bands.size(), 2u);
  EXPECT_THROW(row_mesh({{0.0, 0.7, 0.5, 1.0}, {0, 1, 0, 1}}, 0.5), InvalidRowSpec);
  EXPECT_THROW(row_mesh({{0.1, 1.0}, {0, 1}}, 0.5), InvalidRowSpec);
}

TEST(BabuskaAziz, SmallAndStandard) {
  EXPECT_EQ(babuska_aziz(2, 2).bands.size(), 2u);
  const RowMesh ba = babuska_aziz(8, 64);
  EXPECT_EQ(ba.bands.size(), 64u);
  const double n = static_cast<double>(ba.mesh.num_triangles());
  EXPECT_NEAR(n, 2.0 * 8 * 64, 64.0);
  for (const Band& b : ba.bands) {
    const BandCheck c = check_band(ba.mesh, b);
    EXPECT_TRUE(c.alternation_ok);
    EXPECT_LE(c.collinearity_error, 1e-12);
    EXPECT_NEAR(b.length, 1.0, 1e-14);
    for (int i = 1; i <= b.n(); ++i) EXPECT_GT(1.0 / tilde_sin(ba.mesh, b, i), b.base_h / (4 * b.height));
  }
}

TEST(SingleBand, Structure) {
  const SingleBandMesh sb = single_band_mesh(8, 1.0 / 512);
  EXPECT_EQ(sb.band.height, 1.0 / 512);
  EXPECT_EQ(sb.band.base_h, 1.0 / 8);
  EXPECT_NEAR(sb.band.length, 1.0, 1e-15);
  EXPECT_EQ(sb.band.n(), 7);
  EXPECT_LE(sb.max_angle_outside, 0.75 * kPi);
  int thin = 0;
  for (const Band& b : sb.all_bands) thin += b.height < 0.01 ? 1 : 0;
  EXPECT_EQ(thin, 1);
  EXPECT_THROW(single_band_mesh(8, 1.0 / 16), InvalidParameters);
  EXPECT_THROW(single_band_mesh(8, 0.0), InvalidParameters);
}

TEST(SubdividedBand, SplitsAreRightAngled) {
  const SingleBandMesh sb = single_band_mesh(8, 1.0 / 512);
  const SubdividedBandMesh sub = subdivided_band_mesh(8, 1.0 / 512);
  EXPECT_EQ(sub.mesh.num_triangles(), sb.mesh.num_triangles() + sub.split_sources);
  EXPECT_EQ(sub.split_elements.size(), 2 * sub.split_sources);
  for (int k : sub.split_elements) EXPECT_NEAR(sub.mesh.geom(k).max_angle, kPi / 2, 1e-14);
  const MeshClassification c = classify(sub.mesh, 0.9 * kPi);
  EXPECT_EQ(c.t2.size(), sub.tilde_elements.size());
}

TEST(Cluster, StandardBlock) {
  const ClusterMesh cm = cluster_mesh(8, {3, 3, 2}, 8);
  EXPECT_NEAR(cm.block_diameter, 2 * std::sqrt(2.0) / 8, 1e-15);
  EXPECT_GE(cm.diameter, cm.block_diameter);
  EXPECT_LE(cm.diameter, 4 * std::sqrt(2.0) / 8);
  const ClusterTopology topo = cluster_topology(cm.mesh, cm.cluster);
  EXPECT_TRUE(topo.simply_connected());
  EXPECT_EQ(topo.boundary_loops, 1);
  // Outside the block and its side columns the grid is untouched.
  std::size_t right_halves = 0;
  for (const TriangleGeom& g : cm.mesh.geoms()) right_halves += std::abs(g.area - 1.0 / 128) < 1e-15 ? 1 : 0;
  EXPECT_GE(right_halves, 2u * (64 - 4 * 2));
}

TEST(Cluster, CellHeightRows) {
  EXPECT_TRUE(classify(cluster_mesh(8, {3, 3, 1}, 1).mesh, 0.51 * kPi).t2.empty());
  EXPECT_TRUE(classify(cluster_mesh(8, {3, 3, 2}, 2).mesh, 0.51 * kPi).t2.empty());
}

TEST(Cluster, OutOfRange) {
  EXPECT_THROW(cluster_mesh(8, {0, 3, 2}, 8), BlockOutOfRange);
  EXPECT_THROW(cluster_mesh(8, {6, 3, 2}, 8), BlockOutOfRange);
  EXPECT_THROW(cluster_mesh(8, {3, 3, 0}, 8), BlockOutOfRange);
}

TEST(ElementSetDiameter, Square) {
  const Triangulation t = unit_square_uniform(2);
  EXPECT_NEAR(element_set_diameter(t, {0, 1}), std::sqrt(2.0) / 2, 1e-15);
}
