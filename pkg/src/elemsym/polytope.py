"""The slice D' = {x : sum(x) = gamma} of a coordinate box, its faces, and the
finite set of points where a symmetric combination can have local extrema."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, EmptyDomainError
from .poly import UniPoly
from .symfun import CurveMode, SymCombo, diagonal_restriction

MAX_N = 16


class Tag(str, Enum):
    LO = "LO"
    HI = "HI"
    FREE = "FREE"
    EQUAL = "EQUAL"


_ORDER = {Tag.LO: 0, Tag.HI: 1, Tag.FREE: 2, Tag.EQUAL: 2}


def _pattern_key(pattern) -> tuple[int, ...]:
    return tuple(_ORDER[t] for t in pattern)


@dataclass(frozen=True)
class BoxDomain:
    lo: tuple[float, ...]
    hi: tuple[float, ...]
    gamma: float

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != len(hi) or not lo:
            raise DomainError("lo and hi must be non-empty and of equal length")
        if not all(a < b for a, b in zip(lo, hi)):
            raise DomainError("every interval needs lo < hi")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "gamma", float(self.gamma))

    @classmethod
    def unit(cls, n: int, gamma: float) -> "BoxDomain":
        return cls((0.0,) * n, (1.0,) * n, gamma)

    @property
    def n(self) -> int:
        return len(self.lo)

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.gamma), *map(abs, self.lo), *map(abs, self.hi))

    def is_empty(self) -> bool:
        return not sum(self.lo) <= self.gamma <= sum(self.hi)

    def symmetric_point(self) -> np.ndarray:
        return np.full(self.n, self.gamma / self.n)

    def is_interior(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(np.asarray(self.lo) < x) and np.all(x < np.asarray(self.hi)))


def _require_nonempty(dom: BoxDomain, max_n: int = MAX_N):
    if dom.is_empty():
        raise EmptyDomainError(
            f"gamma={dom.gamma} outside [{sum(dom.lo)}, {sum(dom.hi)}]: the slice is empty"
        )
    if dom.n > max_n:
        raise DomainError(f"n={dom.n} exceeds the enumeration cap {max_n}")


def contains(dom: BoxDomain, x, tol: float = 1e-9) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (dom.n,):
        raise DomainError(f"point has shape {x.shape}, domain has n={dom.n}")
    inside = np.all(np.asarray(dom.lo) - tol <= x) and np.all(x <= np.asarray(dom.hi) + tol)
    on_level = abs(float(x.sum()) - dom.gamma) <= tol * max(1.0, abs(dom.gamma))
    return bool(inside and on_level)


@dataclass(frozen=True)
class Face:
    """Coordinates in ``free`` range over their intervals subject to summing to
    ``gamma_star``; the rest sit at the endpoint recorded in ``fixed``."""

    pattern: tuple[Tag, ...]
    free: tuple[int, ...]
    fixed: tuple[tuple[int, float], ...]
    gamma_star: float
    dim: int

    def point(self, dom: BoxDomain) -> np.ndarray:
        """A relative-interior point: every free coordinate sits at the same
        fraction of its interval."""
        x = np.zeros(len(self.pattern))
        for i, v in self.fixed:
            x[i] = v
        if self.free:
            lo = np.array([dom.lo[k] for k in self.free])
            hi = np.array([dom.hi[k] for k in self.free])
            lam = (self.gamma_star - lo.sum()) / (hi.sum() - lo.sum())
            x[list(self.free)] = lo + lam * (hi - lo)
        return x

    def t_range(self, dom: BoxDomain) -> tuple[float, float]:
        """Feasible range of x_{k1} along an edge (x_{k1} = t, x_{k2} = gamma* - t)."""
        if len(self.free) != 2:
            raise DomainError("t_range is defined for edges only")
        k1, k2 = self.free
        lo = max(dom.lo[k1], self.gamma_star - dom.hi[k2])
        hi = min(dom.hi[k1], self.gamma_star - dom.lo[k2])
        return lo, hi


def _face_from_pattern(dom: BoxDomain, pattern, tol: float) -> Face | None:
    fixed = []
    free = []
    for i, tag in enumerate(pattern):
        if tag is Tag.LO:
            fixed.append((i, dom.lo[i]))
        elif tag is Tag.HI:
            fixed.append((i, dom.hi[i]))
        else:
            free.append(i)
    gstar = dom.gamma - sum(v for _, v in fixed)
    if not free:
        if abs(gstar) > tol:
            return None
        return Face(tuple(pattern), (), tuple(fixed), gstar, 0)
    lo_sum = sum(dom.lo[k] for k in free)
    hi_sum = sum(dom.hi[k] for k in free)
    if gstar < lo_sum - tol or gstar > hi_sum + tol:
        return None
    # Zero slack forces every free coordinate to an endpoint.
    if abs(gstar - lo_sum) <= tol or abs(gstar - hi_sum) <= tol:
        forced = Tag.LO if abs(gstar - lo_sum) <= tol else Tag.HI
        pattern = tuple(forced if t is Tag.FREE else t for t in pattern)
        return _face_from_pattern(dom, pattern, tol)
    return Face(tuple(pattern), tuple(free), tuple(fixed), gstar, max(len(free) - 1, 0))


def enumerate_faces(dom: BoxDomain, tol: float | None = None, max_n: int = MAX_N) -> list[Face]:
    """All faces of D', one canonical description each, sorted by (dim, pattern)."""
    _require_nonempty(dom, max_n)
    tol = 1e-9 * dom.scale if tol is None else tol
    seen = {}
    for pattern in itertools.product((Tag.LO, Tag.HI, Tag.FREE), repeat=dom.n):
        face = _face_from_pattern(dom, pattern, tol)
        if face is not None:
            seen.setdefault(face.pattern, face)
    return sorted(seen.values(), key=lambda f: (f.dim, _pattern_key(f.pattern)))


@dataclass(frozen=True)
class Candidate:
    """A point of the product {a_i, e, b_i}; ``pattern`` is None for points that
    come from the grid oracle rather than the enumeration."""

    point: tuple[float, ...]
    pattern: tuple[Tag, ...] | None
    e: float | None = None

    @property
    def x(self) -> np.ndarray:
        return np.array(self.point)


def enumerate_candidates(
    dom: BoxDomain, tol: float | None = None, max_n: int = MAX_N
) -> list[Candidate]:
    """Every point whose coordinates are a_i, b_i, or one shared value e, with
    the coordinates summing to gamma; duplicates removed, sorted."""
    _require_nonempty(dom, max_n)
    tol = 1e-9 * dom.scale if tol is None else tol
    found: list[Candidate] = []
    for pattern in itertools.product((Tag.LO, Tag.HI, Tag.EQUAL), repeat=dom.n):
        free = [i for i, t in enumerate(pattern) if t is Tag.EQUAL]
        x = np.array(
            [dom.lo[i] if t is Tag.LO else dom.hi[i] if t is Tag.HI else 0.0
             for i, t in enumerate(pattern)]
        )
        gstar = dom.gamma - x.sum()
        if not free:
            if abs(gstar) <= tol:
                found.append(Candidate(tuple(map(float, x)), pattern, None))
            continue
        e = gstar / len(free)
        if all(dom.lo[k] - tol <= e <= dom.hi[k] + tol for k in free):
            x[free] = e
            found.append(Candidate(tuple(map(float, x)), pattern, float(e)))
    # Keep the description with the fewest shared coordinates per point.
    found.sort(key=lambda c: (sum(t is Tag.EQUAL for t in c.pattern), _pattern_key(c.pattern)))
    kept: list[Candidate] = []
    for c in found:
        if not any(np.max(np.abs(c.x - k.x)) <= tol for k in kept):
            kept.append(c)
    return sorted(kept, key=lambda c: c.point)


def edge_restrictions(dom: BoxDomain, phi: SymCombo, faces=None) -> list[tuple[Face, UniPoly]]:
    """phi along every edge, as a polynomial in the first free coordinate."""
    if phi.n != dom.n:
        raise DomainError("combination and domain disagree on n")
    faces = enumerate_faces(dom) if faces is None else faces
    out = []
    for face in faces:
        if face.dim != 1:
            continue
        poly = diagonal_restriction(
            phi, face.gamma_star, face.fixed, CurveMode.EDGE, face.t_range(dom)
        )
        out.append((face, poly))
    return out


def is_nonconstant(poly: UniPoly, rel_tol: float = 1e-10) -> bool:
    c = np.abs(poly.array())
    return bool(c.size > 1 and np.max(c[1:]) > rel_tol * max(1.0, float(np.max(c))))


def all_edges_nonconstant(dom: BoxDomain, phi: SymCombo, rel_tol: float = 1e-10) -> bool:
    return all(is_nonconstant(p, rel_tol) for _, p in edge_restrictions(dom, phi))
