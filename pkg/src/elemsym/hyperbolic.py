"""Real-rooted (hyperbolic) univariate polynomials.

Root isolation is Sturm counting plus bisection, so the number of real roots
is known exactly (up to the gcd threshold) before any root is refined. The
perturbation constructor and the variety sampler build on that count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DomainError, NotHyperbolicError, PreconditionError, SamplingExhausted
from .poly import UniPoly, divide_by_roots
from .symfun import elem_sym_all

__all__ = [
    "UniPoly",
    "RootProfile",
    "Perturbation",
    "roots_of",
    "is_hyperbolic",
    "from_roots",
    "perturb_repeated_roots",
    "point_from_poly",
    "variety_poly",
    "sample_variety_point",
]

# Thresholds tried in order when deciding that a Euclidean remainder vanishes.
# Tight first: a loose threshold merges close roots, a tight one misses the
# gcd of roots whose multiplicity was smeared by coefficient rounding.
GCD_LADDER = (1e-10, 1e-9, 1e-8, 1e-7)
ISOLATION_TOL = 1e-10
# Largest coefficient mismatch, relative to max|coeff|, between f and the
# product rebuilt from its roots.
FIT_TOL = 1e-6
# A critical point counts as a root when |f| there is below this fraction of
# the evaluation scale.
ROLLE_TOL = 1e-13
# A root is treated as repeated when |f'| there is at most MULT_TOL times the
# evaluation scale; this is the setting that most affects distinct counts.
MULT_TOL = 1e-7
MERGE_GAP = 1e-6


@dataclass(frozen=True)
class RootProfile:
    values: tuple[float, ...]
    multiplicities: tuple[int, ...]
    interval: tuple[float, float]

    @property
    def distinct_count(self) -> int:
        return len(self.values)

    @property
    def degree(self) -> int:
        return sum(self.multiplicities)

    @property
    def roots(self) -> np.ndarray:
        return np.repeat(np.array(self.values), self.multiplicities)


def _normalized(c: np.ndarray) -> np.ndarray:
    return c / np.max(np.abs(c))


def _strip_top(c: np.ndarray, thr: float) -> np.ndarray:
    k = len(c)
    while k > 0 and abs(c[k - 1]) <= thr:
        k -= 1
    return c[:k]


def sturm_chain(coeffs: np.ndarray, zero_tol: float = GCD_LADDER[1]) -> list[np.ndarray]:
    """Euclidean remainder chain f, f', -rem, ... with every member scaled to
    unit max-norm. A remainder whose coefficients all fall below
    ``zero_tol * max(1, |quotient|)`` counts as zero, so the last member is a
    numerical gcd(f, f')."""
    a = _normalized(np.asarray(coeffs, dtype=float))
    chain = [a, _normalized(P.polyder(a))]
    while len(chain[-1]) > 1:
        q, r = P.polydiv(chain[-2], chain[-1])
        thr = zero_tol * max(1.0, float(np.max(np.abs(q))))
        r = _strip_top(np.atleast_1d(r), thr)
        if r.size == 0:
            break
        chain.append(-_normalized(r))
    return chain


def _variations(chain: list[np.ndarray], x: float) -> int:
    signs = [np.sign(P.polyval(x, c)) for c in chain]
    signs = [s for s in signs if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _cauchy_bound(c: np.ndarray) -> float:
    return 1.0 + float(np.max(np.abs(c[:-1] / c[-1]))) if len(c) > 1 else 1.0


def _isolate(chain, lo: float, hi: float, width: float) -> list[tuple[float, float]]:
    out = []
    stack = [(lo, hi, _variations(chain, lo), _variations(chain, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        count = va - vb
        if count <= 0:
            continue
        m = 0.5 * (a + b)
        if (count == 1 and b - a <= width) or not a < m < b:
            out.extend([(a, b)] * count)
            continue
        vm = _variations(chain, m)
        stack.append((m, b, vm, vb))
        stack.append((a, m, va, vm))
    return sorted(out)


def _polish(f: UniPoly, mult: int, a: float, b: float) -> float:
    """Newton on f^(mult-1), which has a simple root where f has a root of
    multiplicity ``mult``; falls back to the bracket midpoint if Newton strays."""
    h = f.deriv(mult - 1)
    dh = h.deriv()
    x = 0.5 * (a + b)
    slack = max(b - a, 1e-12 * max(1.0, abs(x)))
    best, best_val = x, abs(h(x))
    for _ in range(30):
        d = dh(x)
        if d == 0.0:
            break
        step = h(x) / d
        x = x - step
        if not (a - slack <= x <= b + slack):
            break
        val = abs(h(x))
        if val < best_val:
            best, best_val = x, val
        if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(x)):
            break
    return float(best)


def _compositions(n: int, s: int):
    for cuts in combinations(range(1, n), s - 1):
        edges = (0,) + cuts + (n,)
        yield tuple(b - a for a, b in zip(edges, edges[1:]))


def _fit_residual(f: UniPoly, values, mults) -> float:
    model = from_roots(np.repeat(values, mults)) * f.leading
    return float(np.max(np.abs(model.array() - f.array()))) / f.norm()


def _fit_multiplicities(f: UniPoly, values) -> tuple[int, ...]:
    """Composition of deg f into len(values) parts that best reproduces f."""
    best, best_res = None, np.inf
    for mults in _compositions(f.degree, len(values)):
        res = _fit_residual(f, values, mults)
        if res < best_res:
            best, best_res = mults, res
    return best


def _roots_at(f: UniPoly, tol: float, gcd_tol: float) -> RootProfile:
    n = f.degree
    c = f.array()
    chain = sturm_chain(c, gcd_tol)
    gcd = chain[-1]
    gcd_deg = len(gcd) - 1
    # Square-free part: its roots are the distinct roots of f.
    sqf, _ = P.polydiv(_normalized(c), gcd)
    sqf = np.atleast_1d(sqf)
    if len(sqf) < 2:
        raise NotHyperbolicError("square-free part is constant")
    sqf_chain = sturm_chain(sqf, 0.0)
    bound = _cauchy_bound(c)
    lo, hi = -bound - 1.0, bound + 1.0
    real_count = _variations(sqf_chain, lo) - _variations(sqf_chain, hi)
    if real_count != n - gcd_deg:
        raise NotHyperbolicError(
            f"{real_count} distinct real roots, {n - gcd_deg} distinct roots overall"
        )
    brackets = _isolate(sqf_chain, lo, hi, tol * max(1.0, bound))
    if len(brackets) != real_count:
        raise NotHyperbolicError("root isolation lost a root")

    mids = np.array([0.5 * (a + b) for a, b in brackets])
    mults = _fit_multiplicities(f, mids)
    values = np.array([_polish(f, m, a, b) for (a, b), m in zip(brackets, mults)])
    if _fit_residual(f, values, mults) > FIT_TOL:
        raise NotHyperbolicError("roots with multiplicity do not reproduce the polynomial")
    order = np.argsort(values, kind="stable")
    values = tuple(float(values[i]) for i in order)
    mults = tuple(mults[i] for i in order)
    values, mults = _merge_split_roots(f, values, mults)
    return RootProfile(values, mults, (values[0] - 1.0, values[-1] + 1.0))


def _bisect(h: UniPoly, a: float, b: float, fa: float) -> float:
    for _ in range(200):
        m = 0.5 * (a + b)
        if not a < m < b:
            break
        fm = h(m)
        if fm == 0.0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _merge_run(run: list[tuple[float, int]]) -> tuple[float, int]:
    total = sum(m for _, m in run)
    return sum(c * m for c, m in run) / total, total + 1


def _rolle_roots(f: UniPoly, zero_tol: float = ROLLE_TOL) -> list[tuple[float, int]]:
    """Roots of f by descending through its derivatives.

    The roots of f^(k+1) split the line into pieces on which f^(k) is
    monotone, so each piece holds at most one root, found by bisection. A
    critical point where |f^(k)| is below ``zero_tol`` times the evaluation
    scale sum|a_i||c|^i is a multiple root. f is hyperbolic iff every level
    ends up with as many roots (with multiplicity) as its degree.
    """
    n = f.degree
    found = [(-f.coeffs[0] / f.coeffs[1], 1)] if n == 1 else None
    if n > 1:
        found = _rolle_roots(f.deriv(), zero_tol)
    if n == 1:
        return found
    absf = UniPoly(np.abs(f.array()))
    bound = _cauchy_bound(f.array()) + 1.0
    lead_sign = np.sign(f.leading)
    out = []
    points = []  # (x, value with exact zeros for detected roots)
    run = []  # adjacent critical points where f vanishes: one smeared root
    for c, m in found:
        v = f(c)
        if abs(v) <= zero_tol * absf(abs(c)):
            run.append((c, m))
            v = 0.0
        elif run:
            out.append(_merge_run(run))
            run = []
        points.append((c, v))
    if run:
        out.append(_merge_run(run))
    ends = [(-bound, lead_sign * (-1) ** n), *points, (bound, lead_sign)]
    for (a, fa), (b, fb) in zip(ends, ends[1:]):
        if fa != 0.0 and fb != 0.0 and (fa > 0) != (fb > 0):
            out.append((_bisect(f, a, b, fa), 1))
    out.sort()
    if sum(m for _, m in out) != n:
        raise NotHyperbolicError(f"degree {n} but {sum(m for _, m in out)} real roots")
    return out


def _merge_split_roots(f: UniPoly, values, mults):
    """Fuse neighbours that are one multiple root split by rounding: a gap
    below MERGE_GAP and |f'| below MULT_TOL times the evaluation scale at both."""
    df = f.deriv()
    absf = UniPoly(np.abs(f.array()))
    flat = [abs(df(v)) <= MULT_TOL * absf(abs(v)) for v in values]
    groups = [[0]]
    for i in range(1, len(values)):
        gap = values[i] - values[i - 1]
        if flat[i] and flat[i - 1] and gap <= MERGE_GAP * max(1.0, abs(values[i])):
            groups[-1].append(i)
        else:
            groups.append([i])
    if all(len(grp) == 1 for grp in groups):
        return values, mults
    new_v, new_m = [], []
    for grp in groups:
        m = sum(mults[i] for i in grp)
        centre = sum(values[i] * mults[i] for i in grp) / m
        a, b = values[grp[0]], values[grp[-1]]
        new_v.append(_polish(f, m, a, b) if len(grp) > 1 else centre)
        new_m.append(m)
    if _fit_residual(f, np.array(new_v), new_m) > FIT_TOL:
        return values, mults
    return tuple(new_v), tuple(new_m)


def roots_of(
    f: UniPoly, tol: float = ISOLATION_TOL, gcd_ladder: tuple[float, ...] = GCD_LADDER
) -> RootProfile:
    """All roots of a hyperbolic polynomial with their multiplicities.

    The Sturm count of distinct real roots must match n - deg gcd(f, f') for
    some threshold in ``gcd_ladder``; if no threshold gives a consistent
    answer, the derivative cascade in ``_rolle_roots`` decides. Raises
    NotHyperbolicError when neither finds n real roots.
    """
    if f.degree < 1:
        raise DomainError("roots_of needs degree >= 1")
    for gcd_tol in gcd_ladder:
        try:
            return _roots_at(f, tol, gcd_tol)
        except NotHyperbolicError:
            pass
    # Euclid on floats cannot see the gcd of roots smeared by rounding (often
    # multiplicity >= 3 next to other roots); derivatives resolve them.
    found = _rolle_roots(f)
    values = np.array([r for r, _ in found])
    mults = tuple(m for _, m in found)
    if _fit_residual(f, values, mults) > FIT_TOL:
        raise NotHyperbolicError("roots with multiplicity do not reproduce the polynomial")
    return RootProfile(tuple(values), mults, (values[0] - 1.0, values[-1] + 1.0))


def is_hyperbolic(f: UniPoly, **kw) -> bool:
    try:
        roots_of(f, **kw)
    except NotHyperbolicError:
        return False
    return True


def from_roots(roots) -> UniPoly:
    """Monic prod(t - r_i); the coefficient of t^(n-j) is (-1)^j E_j(roots)."""
    r = np.asarray(roots, dtype=float).ravel()
    n = r.size
    e = elem_sym_all(r)
    c = np.empty(n + 1)
    for j in range(n + 1):
        c[n - j] = (-1) ** j * e[j]
    return UniPoly(c)


def point_from_poly(f: UniPoly, **kw) -> np.ndarray:
    """Sorted root vector of a hyperbolic polynomial, multiplicities expanded."""
    return roots_of(f, **kw).roots


@dataclass(frozen=True)
class Perturbation:
    """f = p * g with p square-free; f +- eps*g = (p +- eps) * g."""

    f: UniPoly
    p: UniPoly
    g: UniPoly
    eps0: float
    xi: tuple[float, ...]
    interval: tuple[float, float]
    s: int
    checked_at: tuple[float, ...] = field(default=())

    def shifted(self, eps: float) -> tuple[UniPoly, UniPoly]:
        return self.f + self.g * eps, self.f - self.g * eps

    def profile_at(self, eps: float) -> RootProfile:
        """Roots of f + eps*g, assembled from the factors p + eps and g.

        Expanding the product and isolating its roots directly is
        ill-conditioned once g keeps a root of multiplicity >= 3 next to a
        fresh simple root; the factors are each well-conditioned.
        """
        moved = roots_of(self.p + UniPoly((eps,)))
        kept = roots_of(self.g) if self.g.degree >= 1 else None
        values = list(moved.values)
        mults = list(moved.multiplicities)
        if kept is not None:
            scale = max(1.0, max(abs(v) for v in moved.values + kept.values))
            for v, m in zip(kept.values, kept.multiplicities):
                near = [i for i, u in enumerate(values) if abs(u - v) <= 1e-12 * scale]
                if near:
                    mults[near[0]] += m
                else:
                    values.append(v)
                    mults.append(m)
        order = np.argsort(values, kind="stable")
        vals = tuple(float(values[i]) for i in order)
        return RootProfile(vals, tuple(mults[i] for i in order), (vals[0] - 1.0, vals[-1] + 1.0))

    def holds_at(self, eps: float, direct: bool = False) -> bool:
        """Both f + eps*g and f - eps*g are hyperbolic, have more than s
        distinct roots, and keep every root inside the interval.

        ``direct=True`` runs root isolation on the expanded polynomials
        instead of their factors.
        """
        lo, hi = self.interval
        for signed in (eps, -eps):
            try:
                if direct:
                    prof = roots_of(self.f + self.g * signed)
                else:
                    prof = self.profile_at(signed)
            except NotHyperbolicError:
                return False
            if prof.degree != self.f.degree or prof.distinct_count <= self.s:
                return False
            if not (lo < prof.values[0] and prof.values[-1] < hi):
                return False
        return True


def perturb_repeated_roots(f: UniPoly, profile: RootProfile | None = None) -> Perturbation:
    """Split a repeated root: f = p * g with p = prod over distinct roots, then
    f +- eps*g = (p +- eps) * g gains roots for every 0 < eps < eps0."""
    if profile is None:
        try:
            profile = roots_of(f)
        except NotHyperbolicError as exc:
            raise PreconditionError(f"polynomial is not hyperbolic: {exc}") from exc
    n, s = f.degree, profile.distinct_count
    if n < 2:
        raise PreconditionError("degree must be at least 2")
    if s >= n:
        raise PreconditionError(
            "all roots are simple; perturb along a degree n-2 direction instead"
        )
    xs = np.array(profile.values)
    p = from_roots(xs)
    g, _ = divide_by_roots(f, xs)
    lo, hi = float(xs[0] - 1.0), float(xs[-1] + 1.0)
    # one sign witness in each gap of lo < x_1 < ... < x_s < hi
    edges = np.concatenate([[lo], xs, [hi]])
    xi = 0.5 * (edges[:-1] + edges[1:])
    eps0 = 0.5 * float(np.min(np.abs(p(xi))))
    checks = (eps0 / 2, eps0 / 10)
    pert = Perturbation(f, p, g, eps0, tuple(xi), (lo, hi), s, checks)
    for eps in checks:
        if not pert.holds_at(eps):
            raise RuntimeError(f"perturbation check failed at eps={eps:.3g}")
    return pert


def variety_poly(n: int, gammas, free) -> UniPoly:
    """Monic degree-n polynomial whose t^(n-j) coefficient is (-1)^j gammas[j-1]
    for j <= k, with ``free`` filling t^0 .. t^(n-k-1)."""
    gammas = np.asarray(gammas, dtype=float).ravel()
    free = np.asarray(free, dtype=float).ravel()
    k = gammas.size
    if free.size != n - k:
        raise DomainError(f"need {n - k} free coefficients, got {free.size}")
    c = np.empty(n + 1)
    c[n] = 1.0
    for j in range(1, k + 1):
        c[n - j] = (-1) ** j * gammas[j - 1]
    c[: n - k] = free
    return UniPoly(c)


def sample_variety_point(n: int, gammas, seed=None, budget: int = 10_000) -> np.ndarray:
    """Random point with E_j(x) = gammas[j-1] for j = 1..k, by rejection.

    Each draw is a random root vector shifted (and, when E_2 is pinned,
    rescaled) toward the variety; its polynomial then has the pinned
    coefficients overwritten and is kept if it is still hyperbolic.
    """
    gammas = np.asarray(gammas, dtype=float).ravel()
    k = gammas.size
    if not 1 <= k < n:
        raise DomainError(f"need 1 <= k < n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    mean = gammas[0] / n
    spread = gammas[0] ** 2 - 2 * gammas[1] - gammas[0] ** 2 / n if k >= 2 else None
    for _ in range(budget):
        y = rng.standard_normal(n)
        y -= y.mean()
        if spread is not None:
            y *= np.sqrt(max(spread, 0.0) / float(y @ y))
        f = from_roots(y + mean)
        f = variety_poly(n, gammas, f.coeffs[: n - k])
        try:
            return point_from_poly(f)
        except NotHyperbolicError:
            continue
    raise SamplingExhausted(f"no hyperbolic draw in {budget} attempts")
