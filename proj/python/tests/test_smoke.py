import math

import numpy as np
import pytest

import degfem


def test_uniform_counts():
    m = degfem.uniform(8)
    assert m.num_triangles == 128
    assert m.num_vertices == 81
    assert m.vertices.shape == (81, 2)
    assert m.triangles.shape == (128, 3)
    assert m.total_area == pytest.approx(1.0, abs=1e-14)
    # Right isosceles halves everywhere.
    assert np.allclose(m.max_angles(), math.pi / 2)


def test_mesh_from_arrays_rejects_clockwise():
    v = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    good = np.array([[0, 1, 3], [0, 3, 2]])
    assert degfem.Mesh(v, good).num_triangles == 2
    with pytest.raises(degfem.MeshError):
        degfem.Mesh(v, good[:, ::-1])


def test_linear_solution_is_reproduced():
    m = degfem.uniform(6)
    r = degfem.solve(m, "linear")
    assert r["relative_residual"] <= 1e-12
    assert degfem.h1_error(m, r["values"], "linear") < 1e-12


def test_uniform_error_matches_interpolant():
    # On this grid U coincides with the nodal interpolant of x^2 + y^2.
    m = degfem.uniform(8)
    u = degfem.solve(m)["values"]
    assert np.max(np.abs(u - degfem.interpolate(m))) < 1e-12
    # Per cell, grad(u - Iu) = (2x - h, 2y - h) in local coordinates: 2 h^4 / 3, so h sqrt(2/3) in total.
    h = 1 / 8
    assert degfem.h1_error(m, u) == pytest.approx(h * math.sqrt(2.0 / 3.0), rel=1e-12)


def test_projection_value():
    assert degfem.proj_p1_residual(1.0, 1.0) == pytest.approx(1 / (6 * math.sqrt(5)), rel=1e-14)


def test_three_element_identity_against_direct_solve():
    a, b, c = (1.0, 0.0), (0.0, 0.0), (-0.8, 0.05)
    u0 = (0.3, 1.0, -2.0)
    u1 = (0.3, -0.5, 0.7)  # agrees with u0 at b = origin
    r = degfem.three_element_identity(a, b, c, u0, u1)
    # Linear function equal to (u0 - u1)(A) at A and 0 at B, C.
    va = (u0[1] - u1[1]) * a[0] + (u0[2] - u1[2]) * a[1]
    mat = np.array([[1, *a], [1, *b], [1, *c]])
    coef = np.linalg.solve(mat, [va, 0.0, 0.0])
    assert r["lhs"] == pytest.approx(np.hypot(coef[1], coef[2]), rel=1e-12)
    assert r["holds"]


def test_difference_bound():
    lhs, rhs, holds = degfem.difference_bound([1.0, 1.0], [1.0, -1.0])
    # Mean zero already: sum of squared differences 4, A = 2, L = 2, N = 1.
    assert lhs == pytest.approx(4.0)
    assert rhs == pytest.approx(1.0)
    assert holds


def test_bumps():
    assert degfem.eval_phi(0.5, 0.0, 0.0)[0] == pytest.approx(1.0)
    assert degfem.eval_phi(0.5, 0.5, 0.0)[0] == pytest.approx(0.0, abs=1e-15)
    assert degfem.eval_psi(0.5, 0.3, 0.0)[0] == pytest.approx(1.0)
    assert degfem.eval_psi(0.5, 1.0, 0.0)[0] == pytest.approx(0.0, abs=1e-15)


def test_generators():
    m, bands = degfem.babuska_aziz(8, 64)
    assert len(bands) == 64
    m, band, outside = degfem.single_band(8, 1 / 512)
    assert band["n"] == 7 and band["length"] == pytest.approx(1.0)
    assert outside <= 0.75 * math.pi
    m, tilde, split = degfem.subdivided_band(8, 1 / 512)
    t1, t2 = degfem.classify(m)
    assert sorted(t2) == sorted(tilde)
    with pytest.raises(ValueError):
        degfem.single_band(8, 0.5)


def test_study_and_verify():
    summary, csv = degfem.study("uniform", [8, 16, 32])
    assert summary["fit"]["rate"] == pytest.approx(1.0, abs=0.05)
    assert csv.splitlines()[0] == "h,hbar,dofs,h1_error,h1_error_band,l2_gamma,a1,a2,nec_lhs,rate_running"
    assert degfem.verify("identities", seed=3)["passed"]
