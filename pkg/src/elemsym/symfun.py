"""Elementary symmetric polynomials and their real linear combinations.

Everything here works on plain float vectors; ``elem_sym_all`` also accepts a
stack of points with the coordinate axis last, which is what the samplers
and the grid oracle use.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial

from .errors import DomainError
from .poly import UniPoly


@dataclass(frozen=True)
class SymCombo:
    """phi = sum_j coeffs[j] * E_j in ``n`` variables (ascending E-index)."""

    n: int
    coeffs: tuple[float, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"need n >= 1, got {self.n}")
        coeffs = tuple(float(c) for c in self.coeffs)
        if len(coeffs) != self.n + 1:
            raise DomainError(f"expected {self.n + 1} coefficients, got {len(coeffs)}")
        if not all(np.isfinite(coeffs)):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_descending(cls, coeffs: Sequence[float]) -> "SymCombo":
        """Build from (c_n, ..., c_1, c_0), the order the literature writes phi in."""
        return cls(len(coeffs) - 1, tuple(reversed(list(coeffs))))

    @classmethod
    def single(cls, n: int, j: int, scale: float = 1.0) -> "SymCombo":
        c = [0.0] * (n + 1)
        c[j] = scale
        return cls(n, tuple(c))

    @property
    def degree(self) -> int:
        nz = [j for j, c in enumerate(self.coeffs) if c != 0.0 and j >= 1]
        return max(nz) if nz else 0

    def __call__(self, x) -> float:
        return eval_combo(self, x)


def _as_point(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.ndim != 1:
        raise DomainError("a point must be a 1-d vector")
    if not np.all(np.isfinite(a)):
        raise DomainError("point has non-finite entries")
    return a


def elem_sym_all(x) -> np.ndarray:
    """Return (E_0(x), ..., E_m(x)) along the last axis of ``x`` (shape ``(..., m)``).

    Uses E_j(x_1..x_i) = E_j(x_1..x_{i-1}) + x_i * E_{j-1}(x_1..x_{i-1}).
    """
    x = np.asarray(x, dtype=float)
    m = x.shape[-1]
    e = np.zeros(x.shape[:-1] + (m + 1,))
    e[..., 0] = 1.0
    for i in range(m):
        # RHS is materialized before assignment, so the update uses the old row.
        e[..., 1 : i + 2] = e[..., 1 : i + 2] + x[..., i : i + 1] * e[..., 0 : i + 1]
    return e


def eval_elem_sym(x, j: int) -> float:
    x = _as_point(x)
    if not 0 <= j <= x.size:
        raise DomainError(f"index j={j} outside 0..{x.size}")
    return float(elem_sym_all(x)[j])


def _check_dim(phi: SymCombo, n: int):
    if n != phi.n:
        raise DomainError(f"point has dimension {n}, combination expects {phi.n}")


def eval_combo(phi: SymCombo, x) -> float:
    x = _as_point(x)
    _check_dim(phi, x.size)
    return float(elem_sym_all(x) @ np.asarray(phi.coeffs))


def eval_combo_many(phi: SymCombo, xs) -> np.ndarray:
    """Vectorized ``eval_combo`` over a stack of points, shape ``(..., n)``."""
    xs = np.asarray(xs, dtype=float)
    _check_dim(phi, xs.shape[-1])
    return elem_sym_all(xs) @ np.asarray(phi.coeffs)


def gradient(phi: SymCombo, x) -> np.ndarray:
    # dE_j/dx_i is E_{j-1} of the other n-1 coordinates.
    x = _as_point(x)
    _check_dim(phi, x.size)
    c = np.asarray(phi.coeffs)
    g = np.empty(x.size)
    for i in range(x.size):
        e = elem_sym_all(np.delete(x, i))
        g[i] = e @ c[1:]
    return g


class CurveMode(str, Enum):
    EDGE = "edge"
    DIAGONAL = "diagonal"


def restriction_curve(n: int, gamma_star: float, fixed: dict[int, float], mode: CurveMode):
    """Return (free indices, t -> points) for the curve used by ``diagonal_restriction``."""
    mode = CurveMode(mode)
    free = [i for i in range(n) if i not in fixed]
    if len(free) < 2:
        raise DomainError(f"need at least two free coordinates, got {len(free)}")
    if mode is CurveMode.EDGE and len(free) != 2:
        raise DomainError("EDGE mode trades off exactly two free coordinates")
    base = np.zeros(n)
    for i, v in fixed.items():
        base[i] = v
    m = len(free)

    def curve(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        pts = np.tile(base, (t.size, 1))
        pts[:, free[:-1]] = t[:, None]
        pts[:, free[-1]] = gamma_star - (m - 1) * t
        return pts

    return free, curve


def diagonal_restriction(
    phi: SymCombo,
    gamma_star: float,
    fixed: Iterable[tuple[int, float]] = (),
    mode: CurveMode | str = CurveMode.DIAGONAL,
    t_range: tuple[float, float] = (-1.0, 1.0),
) -> UniPoly:
    """Restrict phi to a line inside the face {free coords sum to gamma_star}.

    EDGE: x_{k1} = t, x_{k2} = gamma_star - t (exactly two free coordinates).
    DIAGONAL: all free coordinates but the last equal t, the last takes
    gamma_star - (|K| - 1) t, so the curve stays on the hyperplane.
    Coefficients come from interpolation at Chebyshev nodes over ``t_range``.
    """
    fixed = {int(i): float(v) for i, v in fixed}
    if any(not 0 <= i < phi.n for i in fixed):
        raise DomainError("fixed index out of range")
    _, curve = restriction_curve(phi.n, gamma_star, fixed, mode)
    deg = phi.degree
    lo, hi = float(t_range[0]), float(t_range[1])
    if not hi > lo:
        raise DomainError("t_range must have positive length")
    k = np.arange(deg + 1)
    nodes = np.cos((2 * k + 1) * np.pi / (2 * (deg + 1)))
    t = lo + (nodes + 1.0) * (hi - lo) / 2.0
    vals = eval_combo_many(phi, curve(t))
    cheb = Chebyshev.fit(t, vals, deg, domain=[lo, hi])
    power = cheb.convert(kind=Polynomial)
    return UniPoly(power.coef).chop(1e-12)


def distinct_components(x, tol: float) -> int:
    """Count clusters of the sorted coordinates, splitting at gaps above
    ``tol * max(1, |x|_inf)``."""
    if tol < 0:
        raise DomainError("tol must be non-negative")
    x = np.sort(np.asarray(x, dtype=float).ravel())
    if x.size == 0:
        return 0
    scale = max(1.0, float(np.max(np.abs(x))))
    return 1 + int(np.count_nonzero(np.diff(x) > tol * scale))
