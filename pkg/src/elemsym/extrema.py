"""Global extrema on the box slice, a local-extremum falsifier, brute-force
oracles, and the two randomized verification suites."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, PreconditionError, SamplingExhausted
from .hyperbolic import from_roots, is_hyperbolic, sample_variety_point, variety_poly
from .poly import UniPoly
from .polytope import (
    BoxDomain,
    Candidate,
    _require_nonempty,
    all_edges_nonconstant,
    contains,
    enumerate_candidates,
)
from .symfun import SymCombo, distinct_components, elem_sym_all, eval_combo, eval_combo_many, gradient

TIE_TOL = 1e-10
MARGIN = 1e-10
RADII = (1e-2, 1e-3, 1e-4)
SAMPLES = 512
GRID_MAX_N = 6
FALLBACK_RESOLUTION = 101
DESCENT_STEP_TOL = 1e-9
COMPONENT_TOL = 1e-4
BACKWARD_TOL = 1e-12


def thread_count() -> int:
    """Worker cap from ELEMSYM_THREADS (default: CPU count, at most 8)."""
    raw = os.environ.get("ELEMSYM_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise DomainError(f"ELEMSYM_THREADS must be an integer, got {raw!r}") from None
    return min(8, os.cpu_count() or 1)


def _map_ordered(fn, items, threads: int | None = None) -> list:
    # Executor.map yields in submission order, so results never depend on scheduling.
    items = list(items)
    threads = thread_count() if threads is None else max(1, threads)
    if threads == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _check_pair(dom: BoxDomain, phi: SymCombo):
    if phi.n != dom.n:
        raise DomainError(f"combination has n={phi.n}, domain has n={dom.n}")


# ---------------------------------------------------------------------------
# Global solver and grid oracle


class Method(str, Enum):
    CANDIDATES_EXACT = "CANDIDATES_EXACT"
    GRID_FALLBACK = "GRID_FALLBACK"


@dataclass(frozen=True)
class ExtremumReport:
    min_value: float
    max_value: float
    min_points: tuple[Candidate, ...]
    max_points: tuple[Candidate, ...]
    hypothesis_ok: bool
    method: Method
    candidates_checked: int = 0


@dataclass(frozen=True)
class GridResult:
    min: float
    max: float
    argmin: np.ndarray
    argmax: np.ndarray
    feasible_points: int
    spacing: float


def _grid_axes(dom: BoxDomain, resolution: int) -> list[np.ndarray]:
    return [np.linspace(dom.lo[i], dom.hi[i], resolution) for i in range(dom.n - 1)]


def grid_oracle(
    dom: BoxDomain, phi: SymCombo, resolution: int, max_n: int = GRID_MAX_N
) -> GridResult:
    """Brute force over a uniform grid on the first n-1 coordinates; the last
    coordinate is gamma minus the rest and the point is kept if it fits its box."""
    _check_pair(dom, phi)
    if resolution < 2:
        raise DomainError(f"resolution must be >= 2, got {resolution}")
    if dom.n > max_n:
        raise DomainError(f"grid oracle guarded to n <= {max_n}, got n={dom.n}")
    _require_nonempty(dom)
    n = dom.n
    tol = 1e-12 * dom.scale
    lo_n, hi_n = dom.lo[-1], dom.hi[-1]
    if n == 1:
        x = np.array([[dom.gamma]])
        v = eval_combo_many(phi, x)
        return GridResult(float(v[0]), float(v[0]), x[0], x[0], 1, 0.0)
    axes = _grid_axes(dom, resolution)
    spacing = max(float(a[1] - a[0]) for a in axes)
    # Chunk over the first axis so memory stays at resolution^(n-2) points.
    rest = np.stack(np.meshgrid(*axes[1:], indexing="ij"), axis=-1).reshape(-1, n - 2)
    rest_sum = rest.sum(axis=1)
    best_lo, best_hi = np.inf, -np.inf
    arg_lo = arg_hi = None
    count = 0
    for x0 in axes[0]:
        last = dom.gamma - x0 - rest_sum
        keep = (last >= lo_n - tol) & (last <= hi_n + tol)
        if not keep.any():
            continue
        pts = np.empty((int(keep.sum()), n))
        pts[:, 0] = x0
        pts[:, 1:-1] = rest[keep]
        pts[:, -1] = np.clip(last[keep], lo_n, hi_n)
        vals = eval_combo_many(phi, pts)
        count += vals.size
        i, j = int(np.argmin(vals)), int(np.argmax(vals))
        if vals[i] < best_lo:
            best_lo, arg_lo = float(vals[i]), pts[i].copy()
        if vals[j] > best_hi:
            best_hi, arg_hi = float(vals[j]), pts[j].copy()
    if count == 0:
        raise DomainError("no grid point is feasible; raise the resolution")
    return GridResult(best_lo, best_hi, arg_lo, arg_hi, count, spacing)


def gradient_bound(dom: BoxDomain, phi: SymCombo) -> float:
    """Upper bound on |grad phi| over the box: |dE_j/dx_i| <= E_{j-1} of the
    other coordinates' largest magnitudes."""
    _check_pair(dom, phi)
    m = np.maximum(np.abs(dom.lo), np.abs(dom.hi))
    c = np.abs(np.asarray(phi.coeffs))
    g = np.array([elem_sym_all(np.delete(m, i)) @ c[1:] for i in range(dom.n)])
    return float(np.linalg.norm(g))


def _extreme_set(cands, vals, target, tol) -> tuple[Candidate, ...]:
    hit = [c for c, v in zip(cands, vals) if abs(v - target) <= tol]
    return tuple(sorted(hit, key=lambda c: c.point))


def solve_global(
    dom: BoxDomain, phi: SymCombo, fallback_resolution: int = FALLBACK_RESOLUTION
) -> ExtremumReport:
    """Minimum and maximum of phi over the slice.

    When phi is nonconstant along every edge, the extrema sit among the
    enumerated candidates and the answer is exact up to rounding. Otherwise
    grid points are pooled with the candidates and the method says so.
    """
    _check_pair(dom, phi)
    cands = enumerate_candidates(dom)
    hypothesis_ok = all_edges_nonconstant(dom, phi)
    pool = list(cands)
    method = Method.CANDIDATES_EXACT
    if not hypothesis_ok:
        method = Method.GRID_FALLBACK
        if dom.n <= GRID_MAX_N:
            grid = grid_oracle(dom, phi, fallback_resolution)
            pool += [Candidate(tuple(map(float, grid.argmin)), None),
                     Candidate(tuple(map(float, grid.argmax)), None)]
    vals = eval_combo_many(phi, np.array([c.point for c in pool]))
    lo, hi = float(vals.min()), float(vals.max())
    tol = TIE_TOL * max(1.0, abs(lo), abs(hi))
    return ExtremumReport(
        min_value=lo,
        max_value=hi,
        min_points=_extreme_set(pool, vals, lo, tol),
        max_points=_extreme_set(pool, vals, hi, tol),
        hypothesis_ok=hypothesis_ok,
        method=method,
        candidates_checked=len(cands),
    )


# ---------------------------------------------------------------------------
# Local falsifier


class Status(str, Enum):
    FALSIFIED = "FALSIFIED"
    NOT_FALSIFIED = "NOT_FALSIFIED"


@dataclass(frozen=True)
class Witness:
    point: tuple[float, ...]
    value: float
    radius: float


@dataclass(frozen=True)
class Probe:
    """Best rise and fall seen at one radius (None when nothing beat the margin)."""

    radius: float
    ascent: Witness | None
    descent: Witness | None

    @property
    def straddles(self) -> bool:
        return self.ascent is not None and self.descent is not None


@dataclass(frozen=True)
class LocalVerdict:
    status: Status
    value: float
    margin: float
    ascent_witness: Witness | None
    descent_witness: Witness | None
    budget_used: int
    probes: tuple[Probe, ...] = ()


def _zero_sum_directions(rng, n: int, count: int) -> np.ndarray:
    d = rng.standard_normal((count, n))
    d -= d.mean(axis=1, keepdims=True)
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def _fit_steps(dom: BoxDomain, p: np.ndarray, dirs: np.ndarray, r: float) -> np.ndarray:
    """Scale each direction to length <= r so that p + step stays in the box."""
    lo = np.asarray(dom.lo) - p
    hi = np.asarray(dom.hi) - p
    with np.errstate(divide="ignore", invalid="ignore"):
        room = np.where(dirs > 0, hi / dirs, np.where(dirs < 0, lo / dirs, np.inf))
    t = np.minimum(r, room.min(axis=1))
    return dirs * t[:, None]


def falsify_local_extremum(
    dom: BoxDomain,
    phi: SymCombo,
    p,
    radii=RADII,
    samples_per_radius: int = SAMPLES,
    seed=0,
) -> LocalVerdict:
    """Look for feasible points near p with phi strictly above and strictly
    below phi(p). Finding both proves p is not a local extremum; finding
    neither proves nothing."""
    _check_pair(dom, phi)
    p = np.asarray(p, dtype=float)
    if not contains(dom, p):
        raise PreconditionError("p is not on the slice")
    if not dom.is_interior(p):
        raise PreconditionError("p must be strictly inside the box")
    rng = np.random.default_rng(seed)
    n = dom.n
    v0 = eval_combo(phi, p)
    margin = MARGIN * max(1.0, abs(v0))
    g = gradient(phi, p)
    g -= g.mean()
    gn = float(np.linalg.norm(g))
    probes = []
    used = 0
    for r in radii:
        dirs = _zero_sum_directions(rng, n, samples_per_radius) if n > 1 else np.zeros((0, n))
        if gn > 0:
            dirs = np.vstack([dirs, g / gn, -g / gn])
        if dirs.shape[0] == 0:
            probes.append(Probe(float(r), None, None))
            continue
        pts = p + _fit_steps(dom, p, dirs, r)
        pts[:, -1] = dom.gamma - pts[:, :-1].sum(axis=1)
        vals = eval_combo_many(phi, pts)
        used += vals.size
        i, j = int(np.argmax(vals)), int(np.argmin(vals))
        up = Witness(tuple(map(float, pts[i])), float(vals[i]), float(r)) if vals[i] > v0 + margin else None
        down = Witness(tuple(map(float, pts[j])), float(vals[j]), float(r)) if vals[j] < v0 - margin else None
        probes.append(Probe(float(r), up, down))
    straddling = [pr for pr in probes if pr.straddles]
    if straddling:
        best = min(straddling, key=lambda pr: pr.radius)
        return LocalVerdict(Status.FALSIFIED, v0, margin, best.ascent, best.descent, used, tuple(probes))
    return LocalVerdict(Status.NOT_FALSIFIED, v0, margin, None, None, used, tuple(probes))


# ---------------------------------------------------------------------------
# Random instances


def random_combo(n: int, rng, min_degree: int = 2) -> SymCombo:
    """Gaussian coefficients up to a random degree in [min_degree, n]."""
    if not 1 <= min_degree <= n:
        raise PreconditionError(f"cannot draw degree >= {min_degree} in {n} variables")
    deg = int(rng.integers(min_degree, n + 1))
    c = np.zeros(n + 1)
    c[: deg + 1] = rng.standard_normal(deg + 1)
    c[deg] = np.sign(c[deg]) * max(abs(c[deg]), 0.25) if c[deg] else 1.0
    return SymCombo(n, tuple(c))


def require_degree(phi: SymCombo, min_degree: int):
    if phi.degree < min_degree:
        raise PreconditionError(f"combination has degree {phi.degree}, need >= {min_degree}")


# ---------------------------------------------------------------------------
# Statistical check: no local extremum away from the symmetric point


@dataclass(frozen=True)
class Anomaly:
    trial: int
    phi: SymCombo
    gamma: float
    point: tuple[float, ...]


@dataclass(frozen=True)
class SuiteReport:
    n: int
    trials: int
    points_checked: int
    falsified: int
    escalated: int
    skipped_points: int
    anomalies: tuple[Anomaly, ...]

    @property
    def anomaly_count(self) -> int:
        return len(self.anomalies)


def _interior_points(rng, n, gamma, count, exclusion, budget=20_000) -> list[np.ndarray]:
    sym = np.full(n, gamma / n)
    out = []
    for _ in range(budget):
        if len(out) == count:
            break
        # Near a corner of the cube the slice is a small simplex; sample it directly.
        if gamma <= 1.0:
            y = gamma * rng.dirichlet(np.ones(n))
        elif gamma >= n - 1.0:
            y = 1.0 - (n - gamma) * rng.dirichlet(np.ones(n))
        else:
            y = rng.uniform(0.0, 1.0, n)
            y += (gamma - y.sum()) / n
        if np.all(y > 0) and np.all(y < 1) and np.linalg.norm(y - sym) >= exclusion:
            out.append(y)
    return out


@dataclass(frozen=True)
class _InteriorTrial:
    checked: int
    falsified: int
    escalated: int
    skipped: int
    anomalies: tuple[Anomaly, ...]


def verify_interior_suite(
    n: int,
    trials: int = 50,
    seed=0,
    points_per_trial: int = 20,
    exclusion: float = 0.05,
    radii=RADII,
    samples_per_radius: int = SAMPLES,
    escalation: int = 10,
    phi: SymCombo | None = None,
    threads: int | None = None,
) -> SuiteReport:
    """Probe random interior points of {sum x = gamma} in the open unit cube,
    away from the symmetric point, and count those the falsifier cannot
    dislodge even with an escalated budget."""
    if n < 2:
        raise PreconditionError("need n >= 2")
    if phi is not None:
        require_degree(phi, 2)
        if phi.n != n:
            raise DomainError("combination and n disagree")

    def one(trial: int) -> _InteriorTrial:
        rng = np.random.default_rng([seed, trial])
        f = phi if phi is not None else random_combo(n, rng, 2)
        gamma = float(rng.uniform(0.0, n))
        while not 0.0 < gamma < n:
            gamma = float(rng.uniform(0.0, n))
        dom = BoxDomain.unit(n, gamma)
        pts = _interior_points(rng, n, gamma, points_per_trial, exclusion)
        fals = esc = 0
        bad = []
        for idx, x in enumerate(pts):
            sub = [seed, trial, idx]
            v = falsify_local_extremum(dom, f, x, radii, samples_per_radius, sub)
            if v.status is Status.NOT_FALSIFIED:
                esc += 1
                v = falsify_local_extremum(dom, f, x, radii, escalation * samples_per_radius, sub + [1])
            if v.status is Status.FALSIFIED:
                fals += 1
            else:
                bad.append(Anomaly(trial, f, gamma, tuple(map(float, x))))
        return _InteriorTrial(len(pts), fals, esc, points_per_trial - len(pts), tuple(bad))

    results = _map_ordered(one, range(trials), threads)
    return SuiteReport(
        n=n,
        trials=trials,
        points_checked=sum(r.checked for r in results),
        falsified=sum(r.falsified for r in results),
        escalated=sum(r.escalated for r in results),
        skipped_points=sum(r.skipped for r in results),
        anomalies=tuple(a for r in results for a in r.anomalies),
    )


# ---------------------------------------------------------------------------
# Descent on the variety {E_1 = g_1, ..., E_k = g_k}


def _deleted_sym(x: np.ndarray) -> np.ndarray:
    """Row i holds (E_0, ..., E_{n-1}) of x with coordinate i removed."""
    return np.stack([elem_sym_all(np.delete(x, i)) for i in range(x.size)])


def _constraint_jacobian(x: np.ndarray, k: int) -> np.ndarray:
    # dE_j/dx_i = E_{j-1}(x without x_i), j = 1..k
    return _deleted_sym(x)[:, :k].T


def project_to_variety(x, gammas, max_iter: int = 30) -> np.ndarray:
    """Minimum-norm Newton corrections until E_j(x) = gammas[j-1], j = 1..k."""
    x = np.asarray(x, dtype=float).copy()
    gammas = np.asarray(gammas, dtype=float)
    k = gammas.size
    tol = 1e-15 * max(1.0, float(np.max(np.abs(gammas))))
    for _ in range(max_iter):
        r = elem_sym_all(x)[1 : k + 1] - gammas
        if np.max(np.abs(r)) <= tol:
            break
        J = _constraint_jacobian(x, k)
        x -= np.linalg.lstsq(J, r, rcond=None)[0]
    return x


def _tangent_part(v: np.ndarray, J: np.ndarray) -> np.ndarray:
    return v - J.T @ np.linalg.lstsq(J @ J.T, J @ v, rcond=None)[0]


def _pinned(x: np.ndarray, gammas: np.ndarray) -> tuple[UniPoly, bool]:
    """Pinned polynomial of the real point x and whether it is hyperbolic.

    Tight clusters of roots are not resolvable from float coefficients, so a
    polynomial that differs from the Vieta image of x only by rounding counts
    as hyperbolic (backward-error test); otherwise the root finder decides.
    """
    n, k = x.size, gammas.size
    vieta = from_roots(x)
    poly = variety_poly(n, gammas, vieta.coeffs[: n - k])
    gap = float(np.max(np.abs(poly.array() - vieta.array())))
    if gap <= BACKWARD_TOL * max(1.0, float(np.max(np.abs(vieta.array())))):
        return poly, True
    return poly, is_hyperbolic(poly)


@dataclass(frozen=True)
class DescentResult:
    endpoint: np.ndarray
    poly: UniPoly
    value: float
    iterations: int
    converged: bool
    path: tuple[UniPoly, ...] = ()


def descend_on_variety(
    phi: SymCombo,
    gammas,
    x0,
    max_iter: int = 2000,
    step_tol: float = DESCENT_STEP_TOL,
    record_path: bool = False,
) -> DescentResult:
    """Minimize phi over the real points of the variety.

    Every accepted iterate is the monic polynomial with the pinned top
    coefficients and the free lower coefficients of the trial point; a trial
    is rejected unless that polynomial is hyperbolic. Directions are the
    projected gradient in root coordinates, which stays well scaled where
    roots coalesce; steps are backtracked (Armijo). Stops once the accepted
    step would be shorter than ``step_tol``.
    """
    gammas = np.asarray(gammas, dtype=float).ravel()
    x = np.sort(np.asarray(x0, dtype=float))
    n, k = x.size, gammas.size
    if not 1 <= k < n:
        raise DomainError(f"need 1 <= k < n, got k={k}, n={n}")
    poly, ok = _pinned(x, gammas)
    if not ok:
        raise PreconditionError("start point does not give a hyperbolic polynomial")
    val = eval_combo(phi, x)
    path = [poly] if record_path else []
    alpha = 0.1
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        pg = _tangent_part(gradient(phi, x), _constraint_jacobian(x, k))
        gn = float(np.linalg.norm(pg))
        if gn < 1e-14:
            converged = True
            break
        alpha = min(2.0 * alpha, 1.0)
        accepted = False
        while alpha * gn >= step_tol:
            xt = np.sort(project_to_variety(x - alpha * pg, gammas))
            vt = eval_combo(phi, xt)
            if vt <= val - 1e-4 * alpha * gn * gn:
                pt, ok = _pinned(xt, gammas)
                if ok:
                    accepted = True
                    break
            alpha *= 0.5
        if not accepted:
            converged = True
            break
        x, val, poly = xt, vt, pt
        if record_path:
            path.append(poly)
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > 1e8:
            break
    # x is a real root vector of poly up to rounding; re-extracting the roots
    # from poly would smear any tight cluster to the float resolution.
    return DescentResult(x, poly, val, it, converged, tuple(path))


def falsify_on_variety(
    phi: SymCombo, gammas, p, radii=RADII, samples_per_radius: int = 128, seed=0
) -> LocalVerdict:
    """Falsifier analog on the variety: tangent directions, scaled to each
    radius, projected back onto the variety."""
    gammas = np.asarray(gammas, dtype=float).ravel()
    p = np.asarray(p, dtype=float)
    rng = np.random.default_rng(seed)
    J = _constraint_jacobian(p, gammas.size)
    v0 = eval_combo(phi, p)
    margin = MARGIN * max(1.0, abs(v0))
    probes = []
    used = 0
    g = _tangent_part(gradient(phi, p), J)
    for r in radii:
        dirs = [_tangent_part(d, J) for d in rng.standard_normal((samples_per_radius, p.size))]
        dirs += [g, -g]
        up = down = None
        for d in dirs:
            nd = np.linalg.norm(d)
            if nd == 0:
                continue
            q = project_to_variety(p + r * d / nd, gammas)
            v = eval_combo(phi, q)
            used += 1
            if v > v0 + margin and (up is None or v > up.value):
                up = Witness(tuple(map(float, q)), float(v), float(r))
            if v < v0 - margin and (down is None or v < down.value):
                down = Witness(tuple(map(float, q)), float(v), float(r))
        probes.append(Probe(float(r), up, down))
    straddling = [pr for pr in probes if pr.straddles]
    if straddling:
        best = min(straddling, key=lambda pr: pr.radius)
        return LocalVerdict(Status.FALSIFIED, v0, margin, best.ascent, best.descent, used, tuple(probes))
    return LocalVerdict(Status.NOT_FALSIFIED, v0, margin, None, None, used, tuple(probes))


@dataclass(frozen=True)
class DescentTrial:
    trial: int
    phi: SymCombo | None
    start: tuple[float, ...] | None
    endpoint: tuple[float, ...] | None
    value: float | None
    iterations: int
    converged: bool
    components: int | None
    residual: float | None
    flagged: bool
    skipped: str | None = None


@dataclass(frozen=True)
class BoundReport:
    n: int
    k: int
    gammas: tuple[float, ...]
    trials: tuple[DescentTrial, ...] = field(default_factory=tuple)

    @property
    def converged(self) -> tuple[DescentTrial, ...]:
        return tuple(t for t in self.trials if t.converged and t.skipped is None)

    @property
    def violations(self) -> tuple[DescentTrial, ...]:
        return tuple(t for t in self.converged if t.components > self.k)

    @property
    def flagged(self) -> tuple[DescentTrial, ...]:
        return tuple(t for t in self.trials if t.flagged)

    @property
    def max_residual(self) -> float:
        res = [t.residual for t in self.converged]
        return max(res) if res else 0.0


def verify_component_bound(
    n: int,
    k: int,
    gammas,
    trials: int = 20,
    seed=0,
    max_iter: int = 2000,
    component_tol: float = COMPONENT_TOL,
    phi: SymCombo | None = None,
    threads: int | None = None,
) -> BoundReport:
    """Descend from random points of the variety and count the distinct
    coordinates of each endpoint; endpoints with more than k that the
    variety falsifier cannot dislodge are flagged."""
    gammas = np.asarray(gammas, dtype=float).ravel()
    if gammas.size != k or not 1 <= k < n:
        raise PreconditionError(f"need 1 <= k < n and k pinned values, got k={k}, n={n}")
    if phi is not None:
        require_degree(phi, k + 1)

    def one(trial: int) -> DescentTrial:
        rng = np.random.default_rng([seed, trial])
        f = phi if phi is not None else random_combo(n, rng, k + 1)
        try:
            x0 = sample_variety_point(n, gammas, seed=rng)
        except SamplingExhausted as exc:
            return DescentTrial(trial, f, None, None, None, 0, False, None, None, False, str(exc))
        res = descend_on_variety(f, gammas, x0, max_iter=max_iter)
        e = res.endpoint
        comps = distinct_components(e, component_tol)
        resid = float(np.max(np.abs(elem_sym_all(e)[1 : k + 1] - gammas)))
        flagged = False
        if res.converged and comps > k:
            v = falsify_on_variety(f, gammas, e, seed=[seed, trial, 1])
            flagged = v.status is Status.NOT_FALSIFIED
        return DescentTrial(
            trial, f, tuple(map(float, x0)), tuple(map(float, e)), res.value,
            res.iterations, res.converged, comps, resid, flagged,
        )

    return BoundReport(n, k, tuple(map(float, gammas)), tuple(_map_ordered(one, range(trials), threads)))
