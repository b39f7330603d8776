"""P1 finite elements on meshes with degenerating triangles."""

import json

from ._degfem import (
    Mesh,
    MeshError,
    SolverBreakdown,
    babuska_aziz,
    classify,
    cluster,
    difference_bound,
    eval_phi,
    eval_psi,
    h1_error,
    interpolate,
    proj_p1_residual,
    single_band,
    solve,
    subdivided_band,
    three_element_identity,
    uniform,
)
from ._degfem import study_json as _study_json
from ._degfem import verify_json as _verify_json


def study(family, levels=(), beta=None, alpha=1.0):
    """Run a convergence study. Returns (summary dict, csv text)."""
    summary, csv = _study_json(family, list(levels), beta, alpha)
    return json.loads(summary), csv


def verify(suite, seed=20240531):
    return json.loads(_verify_json(suite, seed))


__all__ = [
    "Mesh",
    "MeshError",
    "SolverBreakdown",
    "babuska_aziz",
    "classify",
    "cluster",
    "difference_bound",
    "eval_phi",
    "eval_psi",
    "h1_error",
    "interpolate",
    "proj_p1_residual",
    "single_band",
    "solve",
    "study",
    "subdivided_band",
    "three_element_identity",
    "uniform",
    "verify",
]
