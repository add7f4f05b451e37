"""Extrema of linear combinations of elementary symmetric polynomials on a
box cut by the hyperplane sum(x) = gamma."""

from .errors import DomainError, EmptyDomainError, NotHyperbolicError, PreconditionError, SamplingExhausted
from .extrema import (
    ExtremumReport,
    LocalVerdict,
    Method,
    Status,
    falsify_local_extremum,
    grid_oracle,
    gradient_bound,
    solve_global,
    verify_interior_suite,
    verify_component_bound,
)
from .hyperbolic import from_roots, is_hyperbolic, perturb_repeated_roots, point_from_poly, roots_of, sample_variety_point
from .poly import UniPoly
from .polytope import BoxDomain, Candidate, Face, enumerate_candidates, enumerate_faces
from .symfun import SymCombo, diagonal_restriction, eval_combo, eval_elem_sym, gradient

__version__ = "0.1.0"
