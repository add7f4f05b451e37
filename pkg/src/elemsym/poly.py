"""Dense univariate real polynomials with ascending coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P


def _trimmed(coeffs: Iterable[float]) -> tuple[float, ...]:
    c = [float(v) for v in coeffs]
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(c) if c else (0.0,)


@dataclass(frozen=True)
class UniPoly:
    """Polynomial ``sum(coeffs[i] * t**i)``; trailing zeros are trimmed."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trimmed(self.coeffs))
        if not all(np.isfinite(self.coeffs)):
            raise ValueError("polynomial coefficients must be finite")

    @classmethod
    def from_descending(cls, coeffs: Sequence[float]) -> "UniPoly":
        return cls(tuple(reversed(list(coeffs))))

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0.0:
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.degree < 0

    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)

    def __call__(self, t):
        return P.polyval(t, self.array())

    def deriv(self, m: int = 1) -> "UniPoly":
        if m <= 0:
            return self
        if self.degree < m:
            return UniPoly((0.0,))
        return UniPoly(P.polyder(self.array(), m))

    def __add__(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(P.polyadd(self.array(), other.array()))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(P.polysub(self.array(), other.array()))

    def __neg__(self) -> "UniPoly":
        return UniPoly(-self.array())

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return UniPoly(P.polymul(self.array(), other.array()))
        return UniPoly(self.array() * float(other))

    __rmul__ = __mul__

    def monic(self) -> "UniPoly":
        return UniPoly(self.array() / self.leading)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def chop(self, rel_tol: float) -> "UniPoly":
        """Zero out coefficients below ``rel_tol * max(1, max|c|)``."""
        c = self.array()
        thr = rel_tol * max(1.0, float(np.max(np.abs(c))))
        c[np.abs(c) <= thr] = 0.0
        return UniPoly(c)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0.0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            terms.append(f"{c:.17g}" + ("*" + mono if mono else ""))
        return " + ".join(terms)


def deflate(f: UniPoly, root: float) -> tuple[UniPoly, float]:
    """Synthetic division of ``f`` by ``(t - root)``; returns (quotient, remainder)."""
    c = f.coeffs
    n = len(c) - 1
    if n < 1:
        raise ValueError("cannot deflate a constant")
    q = [0.0] * n
    acc = c[n]
    for i in range(n - 1, -1, -1):
        q[i] = acc
        acc = c[i] + root * acc
    return UniPoly(q), acc


def divide_by_roots(f: UniPoly, roots: Iterable[float]) -> tuple[UniPoly, float]:
    """Deflate ``f`` by each root in turn. Returns the quotient and the largest
    remainder magnitude seen."""
    worst = 0.0
    for r in roots:
        f, rem = deflate(f, r)
        worst = max(worst, abs(rem))
    return f, worst
