#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "degfem/analysis.hpp"
#include "degfem/fem.hpp"

using namespace degfem;
constexpr double kPi = std::numbers::pi;

TEST(H1Error, ReferenceTriangle) {
  // Interpolant gradient (1,1); int |(2x-1, 2y-1)|^2 over the unit simplex = 2 * 1/6.
  const TriangleGeom g = tri_metrics({0, 0}, {1, 0}, {0, 1});
  EXPECT_NEAR(element_error_sq(paraboloid(), g, {1, 1}), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(element_error_sq(paraboloid(), g, {1, 1}, QuadDegree::Five), 1.0 / 3.0, 1e-15);
}

TEST(H1Error, LinearIsZero) {
  const ManufacturedSolution u = linear_solution(1, 2, -3);
  const Triangulation t = babuska_aziz(4, 16).mesh;
  EXPECT_LE(h1_error(u, lagrange(u, t), t), 1e-13);
}

TEST(H1Error, UniformClosedForm) {
  // Per cell grad(u - Iu) = (2x - h, 2y - h) locally, giving h sqrt(2/3) overall.
  for (int n : {4, 8}) {
    const Triangulation t = unit_square_uniform(n);
    EXPECT_NEAR(h1_error(paraboloid(), lagrange(paraboloid(), t), t), std::sqrt(2.0 / 3.0) / n, 1e-14);
  }
}

TEST(L2Gamma, InterpolationError) {
  // Linear interpolation of t^2 on an edge of length h: int (t (h - t))^2 = h^5 / 30.
  const Triangulation t = unit_square_uniform(8);
  std::vector<std::array<int, 2>> edges;
  for (const Edge& e : t.edges()) {
    if (t.vertex(e.key.lo).y == 0.5 && t.vertex(e.key.hi).y == 0.5) edges.push_back({e.key.lo, e.key.hi});
  }
  ASSERT_EQ(edges.size(), 8u);
  const double h = 1.0 / 8;
  EXPECT_NEAR(l2_boundary_error(paraboloid(), lagrange(paraboloid(), t), t, edges), h * h / std::sqrt(30.0), 1e-15);
  const ManufacturedSolution lin = linear_solution(1, 1, 1);
  EXPECT_LE(l2_boundary_error(lin, lagrange(lin, t), t, edges), 1e-15);
}

TEST(ProjP1, Values) {
  EXPECT_NEAR(proj_p1_residual(1, 1), 1 / (6 * std::sqrt(5.0)), 1e-15);
  EXPECT_NEAR(proj_p1_residual(1, 1), 0.0745355992, 1e-10);
  EXPECT_NEAR(proj_p1_residual(2, 1), 0.4216370, 1e-7);
  EXPECT_EQ(proj_p1_residual(1, 0), 0.0);
}

TEST(BandTrace, LinearAndQuadratic) {
  const SingleBandMesh sb = single_band_mesh(8, 1.0 / 512);
  const BandTrace lin = band_trace(sb.mesh, lagrange(linear_solution(1, 2, 3), sb.mesh), sb.band);
  for (double w : lin.wprime) EXPECT_NEAR(w, 0.0, 1e-14);
  const ManufacturedSolution x2 = quadratic_solution(1, 0, 0);
  const NodalField f = lagrange(x2, sb.mesh);
  const BandTrace q = band_trace(sb.mesh, f, sb.band);
  EXPECT_LE(std::abs(q.weighted_sum), 1e-10 * q.scale);
  EXPECT_TRUE(q.balanced);
  // Jumps recomputed from the element gradients of K_i along the band.
  double jumps = 0.0;
  for (std::size_t i = 1; i < sb.band.odd_elements.size(); ++i) {
    const double d = element_gradient(sb.mesh, sb.band.odd_elements[i], f).x -
                     element_gradient(sb.mesh, sb.band.odd_elements[i - 1], f).x;
    jumps += d * d;
  }
  EXPECT_NEAR(q.slope_jumps_sq, jumps, 1e-12 * jumps);
}

TEST(DifferenceBound, Examples) {
  DifferenceBound d = difference_bound_oracle({1, 2, 3}, {0, 0, 0});
  EXPECT_EQ(d.lhs, 0.0);
  EXPECT_EQ(d.rhs, 0.0);
  // Alternating signs, N + 1 = 4 unit intervals: lhs = 3 * 4, A = 4, L = 4, N = 3.
  d = difference_bound_oracle({1, 1, 1, 1}, {1, -1, 1, -1});
  EXPECT_DOUBLE_EQ(d.lhs, 12.0);
  EXPECT_DOUBLE_EQ(d.rhs, 1.0 / 3.0);
  EXPECT_TRUE(d.holds);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(1e-3, 1);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> h(6), a(6);
    for (auto& x : h) x = u(rng);
    for (auto& x : a) x = 10 * u(rng);
    EXPECT_TRUE(difference_bound_oracle(h, a).holds);
  }
  EXPECT_THROW(difference_bound_oracle({1, 0}, {1, 2}), std::invalid_argument);
}

TEST(BandSplit, Definitions) {
  const SingleBandMesh sb = single_band_mesh(8, 1.0 / 512);
  const ManufacturedSolution u = paraboloid();
  const NodalField lin = lagrange(linear_solution(1, 2, 3), sb.mesh);
  EXPECT_NEAR(band_split(u, lin, sb.band, sb.mesh).a1, 0.0, 1e-12);
  const NodalField U = solve(assemble(sb.mesh, u)).field;
  const BandErrorSplit s = band_split(u, U, sb.band, sb.mesh);
  EXPECT_EQ(s.a1 + s.a2, s.h1_error_on_tilde);
  EXPECT_NEAR(s.h1_error_on_tilde, h1_error(u, U, sb.mesh, sb.band.even_elements), 1e-12 * s.h1_error_on_tilde);
}

TEST(Necessary, RegularBand) {
  const SingleBandMesh sb = single_band_mesh(8, 1.0 / 512);
  const NecessaryReport r = necessary_lhs({sb.band}, sb.mesh, 1.0);
  // (1 / (4 sqrt 2)) (1/64) sqrt(512) = 1/16.
  EXPECT_NEAR(r.bands[0].closed_form, 0.0625, 1e-15);
  EXPECT_GE(r.bands[0].value, r.bands[0].closed_form);
  EXPECT_NEAR(r.bands[0].length_threshold, std::pow(sb.mesh.mesh_size(), 0.4), 1e-15);
}

TEST(Necessary, ManyBands) {
  const RowMesh ba = babuska_aziz(8, 64);
  const NecessaryReport r = necessary_lhs(ba.bands, ba.mesh, 1.0);
  const double h = 1.0 / 8, hbar = 1.0 / 64;
  EXPECT_NEAR(r.multi_closed_form, h * h / hbar / (4 * std::sqrt(2.0)), 1e-14);
  EXPECT_GE(r.aggregate, r.multi_closed_form);
  // Right isosceles rows: sin factors are O(1) and the values stay small.
  const RowMesh sq = babuska_aziz(8, 16);
  const NecessaryReport s = necessary_lhs(sq.bands, sq.mesh, 1.0);
  for (const BandNecessary& b : s.bands) {
    EXPECT_TRUE(std::isfinite(b.value));
    EXPECT_LT(b.value, 0.1);
  }
}

TEST(Sufficient, Verdicts) {
  const ManufacturedSolution u = paraboloid();
  {
    const Triangulation t = unit_square_uniform(8);
    const MeshClassification c = classify(t, 0.9 * kPi);
    const SufficientReport r = sufficient_check(t, c, build_correction(u, t, c));
    EXPECT_TRUE(r.verdict);
    EXPECT_EQ(r.t2_count, 0u);
  }
  {
    const SubdividedBandMesh sb = subdivided_band_mesh(8, 1.0 / 512);
    const MeshClassification c = classify(sb.mesh, 0.9 * kPi);
    const SufficientReport r = sufficient_check(sb.mesh, c, build_correction(u, sb.mesh, c));
    EXPECT_TRUE(r.verdict);
    EXPECT_LE(r.sum_h2, r.h2_budget);
    EXPECT_LE(r.max_angle_t1, 0.9 * kPi);
  }
  {
    const SingleBandMesh sb = single_band_mesh(8, 1.0 / 512);
    const MeshClassification c = classify(sb.mesh, 0.9 * kPi);
    const SufficientReport r = sufficient_check(sb.mesh, c, build_correction(u, sb.mesh, c));
    EXPECT_FALSE(r.verdict);
    ASSERT_FALSE(r.violations.empty());
    EXPECT_FALSE(r.violations[0].offenders.empty());
  }
}

TEST(Identity, TrivialCases) {
  const Triplet t{{1, 0}, {0, 0}, {-1, 0.01}};
  const Affine u{0.5, {1, -2}};
  IdentityResult r = three_element_identity_check(t, u, u);
  EXPECT_EQ(r.lhs, 0.0L);
  EXPECT_EQ(r.rhs, 0.0L);
  // grad(U0 - U1) orthogonal to A - B: the jump does not reach A.
  const Affine u1{0.5, {1, -1}};
  r = three_element_identity_check(t, u, u1);
  EXPECT_NEAR(static_cast<double>(r.rhs), 0.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(r.lhs), 0.0, 1e-15);
  EXPECT_THROW(three_element_identity_check(t, u, Affine{0.6, {1, -1}}), InvalidConfiguration);
  EXPECT_THROW(three_element_identity_check({{1, 0}, {0, 0}, {2, 0}}, u, u), InvalidConfiguration);
}

TEST(Identity, AgainstDirectConstruction) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const double alpha = kPi * (0.9 + 0.099 * (d(rng) + 1) / 2);
    const Triplet t{{1, 0}, {0, 0}, {std::cos(alpha), std::sin(alpha)}};
    const Affine u0{0.0, {d(rng), d(rng)}}, u1{0.0, {d(rng), d(rng)}};
    const IdentityResult r = three_element_identity_check(t, u0, u1);
    // U~1 through (A, U0(A)), (B, U1(B)), (C, U1(C)).
    const Affine tilde = Affine::through({t.a, t.b, t.c}, {u0(t.a), u1(t.b), u1(t.c)});
    const double direct = norm(tilde.g - u1.g);
    EXPECT_NEAR(static_cast<double>(r.lhs), direct, 1e-9 * std::max(1.0, direct));
    EXPECT_TRUE(r.holds);
  }
}

TEST(FitRate, PowerLaw) {
  const RateFit f = fit_rate({0.5, 0.25, 0.125}, {3 * 0.25, 3 * 0.0625, 3 * 0.015625});
  EXPECT_NEAR(f.rate, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-14);
  EXPECT_NEAR(f.residual, 0.0, 1e-14);
}
