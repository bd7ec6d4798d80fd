"""Grid homology over F2 for (singular) knots, equivariant localization
spectral sequences for symmetric grids, the s_tau invariant, and skein
exact-triangle verification."""

from . import errors
from .equivariant_ss import SSPage, STauResult, pages, s_tau, s_tau_from_complex, theorem2_report
from .f2_algebra import (
    BigradedComplex,
    LaurentPoly2,
    TPoly,
    alexander_polynomial,
    euler,
    poincare,
    strip_V,
)
from .grid_model import (
    GridDiagram,
    bigradings,
    boundary,
    grading,
    grid_complex,
    linking_number,
    nw_states,
    rel_grading,
    states,
    validate,
)
from .skein_lab import SkeinTriple, center_split, cone, resolve, singularize, verify_triangle
from .symmetry import InvolutionSpec, act, detect, verify_equivariance

__all__ = [
    "errors",
    "GridDiagram", "validate", "states", "nw_states", "rel_grading",
    "grading", "bigradings", "boundary", "grid_complex", "linking_number",
    "BigradedComplex", "LaurentPoly2", "TPoly", "poincare", "strip_V",
    "euler", "alexander_polynomial",
    "InvolutionSpec", "detect", "act", "verify_equivariance",
    "SSPage", "STauResult", "pages", "s_tau", "s_tau_from_complex",
    "theorem2_report",
    "SkeinTriple", "singularize", "resolve", "center_split", "cone",
    "verify_triangle",
]

__version__ = "1.0.0"
