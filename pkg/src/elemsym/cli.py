"""Command-line front end.

    elemsym solve foregger
    elemsym check-point foregger --point 0.5,0.5,0.25 --format json
    elemsym perturb --poly=-2,5,-4,1
    elemsym verify --theorem 3 --n 4 --gammas 0,-2

Exit status: 0 on success, 2 on invalid or infeasible input, 1 on an
internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import extrema
from .errors import DomainError, EmptyDomainError, NotHyperbolicError, PreconditionError, SamplingExhausted
from .hyperbolic import perturb_repeated_roots, roots_of, sample_variety_point
from .poly import UniPoly
from .polytope import BoxDomain, edge_restrictions, enumerate_candidates, enumerate_faces
from .symfun import CurveMode, SymCombo, diagonal_restriction, eval_combo

BUNDLED = ("foregger",)


class ProblemError(DomainError):
    pass


@dataclass(frozen=True)
class ProblemSpec:
    n: int
    coeffs: tuple[float, ...]
    gamma: float | None = None
    gammas: tuple[float, ...] | None = None
    box: tuple[tuple[float, float], ...] | None = None
    points: tuple[tuple[float, ...], ...] = ()
    seed: int = 0
    radii: tuple[float, ...] = extrema.RADII
    samples_per_radius: int = extrema.SAMPLES
    resolution: int = extrema.FALLBACK_RESOLUTION
    source: str = field(default="", compare=False)

    @property
    def phi(self) -> SymCombo:
        return SymCombo(self.n, self.coeffs)

    @property
    def level(self) -> float:
        return self.gamma if self.gamma is not None else self.gammas[0]

    def domain(self) -> BoxDomain:
        box = self.box or tuple((0.0, 1.0) for _ in range(self.n))
        return BoxDomain(tuple(a for a, _ in box), tuple(b for _, b in box), self.level)


def _field(data: dict, key: str, kind, source: str):
    try:
        return kind(data[key])
    except (TypeError, ValueError) as exc:
        raise ProblemError(f"{source}: field '{key}': {exc}") from None


def _vector(value, key: str, source: str) -> tuple[float, ...]:
    if not isinstance(value, list) or not all(isinstance(v, (int, float)) for v in value):
        raise ProblemError(f"{source}: field '{key}' must be a list of numbers")
    return tuple(float(v) for v in value)


def _resolve(path: str | Path) -> tuple[str, str]:
    name = str(path)
    if name in BUNDLED or name.removesuffix(".json") in BUNDLED and not Path(name).exists():
        stem = name.removesuffix(".json")
        text = resources.files("elemsym").joinpath("data", f"{stem}.json").read_text(encoding="utf-8")
        return text, f"<bundled {stem}.json>"
    p = Path(name)
    if not p.is_file():
        raise ProblemError(f"problem file not found: {name}")
    return p.read_text(encoding="utf-8"), name


def parse_problem(path) -> ProblemSpec:
    """Read a JSON problem file (or a bundled name such as ``foregger``)."""
    text, source = _resolve(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ProblemError(f"{source}: top level must be an object")
    for key in ("n", "coeffs"):
        if key not in data:
            raise ProblemError(f"{source}: missing field '{key}'")
    n = _field(data, "n", int, source)
    if n < 1:
        raise ProblemError(f"{source}: field 'n' must be positive")
    coeffs = _vector(data["coeffs"], "coeffs", source)
    order = data.get("order", "ascending")
    if order not in ("ascending", "descending"):
        raise ProblemError(f"{source}: field 'order' must be 'ascending' or 'descending'")
    if order == "descending":
        coeffs = tuple(reversed(coeffs))
    if len(coeffs) != n + 1:
        raise ProblemError(f"{source}: field 'coeffs' needs {n + 1} entries, got {len(coeffs)}")
    has_g, has_gs = "gamma" in data, "gammas" in data
    if has_g == has_gs:
        raise ProblemError(f"{source}: give exactly one of 'gamma' or 'gammas'")
    gamma = _field(data, "gamma", float, source) if has_g else None
    gammas = _vector(data["gammas"], "gammas", source) if has_gs else None
    if gammas is not None and not 1 <= len(gammas) < n:
        raise ProblemError(f"{source}: field 'gammas' needs between 1 and {n - 1} entries")
    box = None
    if "box" in data:
        raw = data["box"]
        if not isinstance(raw, list) or len(raw) != n:
            raise ProblemError(f"{source}: field 'box' needs {n} pairs")
        box = tuple(_vector(pair, "box", source) for pair in raw)
        for i, pair in enumerate(box):
            if len(pair) != 2 or not pair[0] < pair[1]:
                raise ProblemError(f"{source}: field 'box' entry {i} must be [a, b] with a < b")
    points = tuple(_vector(p, "points", source) for p in data.get("points", []))
    if any(len(p) != n for p in points):
        raise ProblemError(f"{source}: every entry of 'points' needs {n} coordinates")
    extra = {}
    if "seed" in data:
        extra["seed"] = _field(data, "seed", int, source)
    if "radii" in data:
        extra["radii"] = _vector(data["radii"], "radii", source)
    if "samples_per_radius" in data:
        extra["samples_per_radius"] = _field(data, "samples_per_radius", int, source)
    if "resolution" in data:
        extra["resolution"] = _field(data, "resolution", int, source)
    return ProblemSpec(n, coeffs, gamma, gammas, box, points, source=source, **extra)


# ---------------------------------------------------------------------------
# Rendering


def _num(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return _num(obj)


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    return str(v)


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, dict) or (isinstance(v, list) and v and isinstance(v[0], (dict, list))):
                lines.append(f"{pad}{k}:")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_fmt(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                sub = _text(item, indent + 1)
                lines.append(f"{pad}- " + sub[0].strip())
                lines += sub[1:]
            else:
                lines.append(f"{pad}- {_fmt(item)}")
    else:
        lines.append(f"{pad}{_fmt(obj)}")
    return lines


def render(report: dict, fmt: str) -> str:
    report = _jsonable(report)
    if fmt == "json":
        return json.dumps(report, indent=2)
    return "\n".join(_text(report))


def _defaults(spec: ProblemSpec | None = None) -> dict:
    return {
        "tie_tol": extrema.TIE_TOL,
        "falsify_margin": extrema.MARGIN,
        "radii": list(spec.radii if spec else extrema.RADII),
        "samples_per_radius": spec.samples_per_radius if spec else extrema.SAMPLES,
        "grid_max_n": extrema.GRID_MAX_N,
        "fallback_resolution": spec.resolution if spec else extrema.FALLBACK_RESOLUTION,
        "descent_step_tol": extrema.DESCENT_STEP_TOL,
        "component_tol": extrema.COMPONENT_TOL,
        "seed": spec.seed if spec else 0,
        "threads": extrema.thread_count(),
    }


def _candidate(c, phi) -> dict:
    return {
        "point": list(c.point),
        "value": eval_combo(phi, c.point),
        "pattern": [t.value for t in c.pattern] if c.pattern is not None else None,
    }


def _verdict(v: extrema.LocalVerdict) -> dict:
    def wit(w):
        return None if w is None else {"point": list(w.point), "value": w.value, "radius": w.radius}

    return {
        "status": v.status.value,
        "value": v.value,
        "margin": v.margin,
        "ascent_witness": wit(v.ascent_witness),
        "descent_witness": wit(v.descent_witness),
        "budget_used": v.budget_used,
        "probes": [
            {"radius": p.radius, "rise": None if p.ascent is None else p.ascent.value - v.value,
             "fall": None if p.descent is None else v.value - p.descent.value}
            for p in v.probes
        ],
    }


def _profile(prof) -> dict:
    return {"roots": list(prof.values), "multiplicities": list(prof.multiplicities),
            "distinct": prof.distinct_count}


# ---------------------------------------------------------------------------
# Subcommands


def _need_spec(args) -> ProblemSpec:
    if not args.problem:
        raise ProblemError("this command needs a problem file (or a bundled name such as 'foregger')")
    return parse_problem(args.problem)


def _parse_floats(text: str, what: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ProblemError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def cmd_solve(args) -> dict:
    spec = _need_spec(args)
    dom, phi = spec.domain(), spec.phi
    rep = extrema.solve_global(dom, phi, spec.resolution)
    out = {
        "min_value": rep.min_value,
        "max_value": rep.max_value,
        "min_points": [_candidate(c, phi) for c in rep.min_points],
        "max_points": [_candidate(c, phi) for c in rep.max_points],
        "hypothesis_ok": rep.hypothesis_ok,
        "method": rep.method.value,
        "candidates_checked": rep.candidates_checked,
    }
    checks = []
    for i, p in enumerate(spec.points):
        entry = {"point": list(p), "value": eval_combo(phi, p)}
        if dom.is_interior(p):
            v = extrema.falsify_local_extremum(dom, phi, p, spec.radii, spec.samples_per_radius, [spec.seed, i])
            entry["status"] = v.status.value
        entry["below_max_by"] = rep.max_value - entry["value"]
        checks.append(entry)
    if checks:
        out["check_points"] = checks
    return out


def cmd_candidates(args) -> dict:
    spec = _need_spec(args)
    cands = enumerate_candidates(spec.domain())
    return {"count": len(cands), "candidates": [_candidate(c, spec.phi) for c in cands]}


def cmd_faces(args) -> dict:
    spec = _need_spec(args)
    faces = enumerate_faces(spec.domain())
    return {
        "count": len(faces),
        "faces": [
            {"pattern": [t.value for t in f.pattern], "dim": f.dim, "free": list(f.free),
             "gamma_star": f.gamma_star}
            for f in faces
        ],
    }


def cmd_check_point(args) -> dict:
    spec = _need_spec(args)
    if args.point:
        p = _parse_floats(args.point, "--point")
    elif spec.points:
        p = spec.points[0]
    else:
        raise ProblemError("no --point given and the problem lists no points")
    if len(p) != spec.n:
        raise ProblemError(f"--point needs {spec.n} coordinates")
    v = extrema.falsify_local_extremum(
        spec.domain(), spec.phi, p, spec.radii, spec.samples_per_radius, spec.seed
    )
    return {"point": list(p), **_verdict(v)}


def cmd_perturb(args) -> dict:
    c = _parse_floats(args.poly, "--poly")
    f = UniPoly.from_descending(c) if args.order == "descending" else UniPoly(c)
    if f.degree < 1:
        raise ProblemError("--poly must have degree >= 1")
    prof = roots_of(f)
    pert = perturb_repeated_roots(f, prof)
    eps = pert.eps0 / 2
    return {
        "f": list(f.coeffs),
        "g": list(pert.g.coeffs),
        "g_degree": pert.g.degree,
        "eps0": pert.eps0,
        "interval": list(pert.interval),
        "before": _profile(prof),
        "after_plus": _profile(pert.profile_at(eps)),
        "after_minus": _profile(pert.profile_at(-eps)),
        "eps_used": eps,
    }


def cmd_restrict(args) -> dict:
    spec = _need_spec(args)
    dom, phi = spec.domain(), spec.phi
    if args.diagonal:
        lo, hi = max(dom.lo[:-1]), min(dom.hi[:-1])
        poly = diagonal_restriction(phi, dom.gamma, (), CurveMode.DIAGONAL, (lo, hi))
        return {"mode": "diagonal", "t_range": [lo, hi], "coeffs": list(poly.coeffs), "degree": poly.degree}
    out = []
    for face, poly in edge_restrictions(dom, phi):
        out.append({"pattern": [t.value for t in face.pattern], "free": list(face.free),
                    "t_range": list(face.t_range(dom)), "coeffs": list(poly.coeffs), "degree": poly.degree})
    return {"mode": "edge", "edges": out}


def _gammas(args, spec: ProblemSpec | None) -> tuple[float, ...]:
    if args.gammas:
        return _parse_floats(args.gammas, "--gammas")
    if spec is not None and spec.gammas is not None:
        return spec.gammas
    raise ProblemError("give --gammas or a problem with 'gammas'")


def cmd_sample_variety(args) -> dict:
    spec = parse_problem(args.problem) if args.problem else None
    n = args.n or (spec.n if spec else None)
    if not n:
        raise ProblemError("give --n or a problem file")
    gam = _gammas(args, spec)
    rng = np.random.default_rng(args.seed)
    pts = [sample_variety_point(n, gam, seed=rng) for _ in range(args.count)]
    return {"n": n, "gammas": list(gam), "points": [list(p) for p in pts]}


def cmd_oracle(args) -> dict:
    spec = _need_spec(args)
    g = extrema.grid_oracle(spec.domain(), spec.phi, args.resolution)
    return {"resolution": args.resolution, "min": g.min, "max": g.max, "argmin": list(g.argmin),
            "argmax": list(g.argmax), "feasible_points": g.feasible_points, "spacing": g.spacing,
            "gradient_bound": extrema.gradient_bound(spec.domain(), spec.phi)}


def cmd_verify(args) -> dict:
    spec = parse_problem(args.problem) if args.problem else None
    n = args.n or (spec.n if spec else None)
    if not n:
        raise ProblemError("give --n or a problem file")
    if args.theorem == 1:
        r = extrema.verify_interior_suite(n, args.trials, args.seed)
        return {"theorem": 1, "n": n, "trials": r.trials, "points_checked": r.points_checked,
                "falsified": r.falsified, "escalated": r.escalated, "skipped_points": r.skipped_points,
                "anomalies": [{"trial": a.trial, "gamma": a.gamma, "point": list(a.point)} for a in r.anomalies]}
    gam = _gammas(args, spec)
    r = extrema.verify_component_bound(n, len(gam), gam, args.trials, args.seed)
    return {
        "theorem": 3, "n": n, "k": r.k, "gammas": list(r.gammas),
        "converged": len(r.converged), "violations": len(r.violations), "flagged": len(r.flagged),
        "max_residual": r.max_residual,
        "trials": [{"trial": t.trial, "converged": t.converged, "components": t.components,
                    "iterations": t.iterations, "endpoint": list(t.endpoint) if t.endpoint else None,
                    "skipped": t.skipped} for t in r.trials],
    }


COMMANDS = {
    "solve": cmd_solve,
    "candidates": cmd_candidates,
    "faces": cmd_faces,
    "check-point": cmd_check_point,
    "perturb": cmd_perturb,
    "restrict": cmd_restrict,
    "sample-variety": cmd_sample_variety,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elemsym", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, problem="required"):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if problem == "required":
            p.add_argument("problem", help="JSON problem file or bundled name (foregger)")
        elif problem == "optional":
            p.add_argument("problem", nargs="?", help="JSON problem file or bundled name")
        return p

    add("solve", "global min/max via candidate enumeration")
    add("candidates", "list the candidate points")
    add("faces", "list the faces of the slice")
    p = add("check-point", "try to falsify a local extremum at a point")
    p.add_argument("--point", help="comma-separated coordinates (default: first problem point)")
    p = add("perturb", "split repeated roots of a real-rooted polynomial", problem=None)
    p.add_argument("--poly", required=True, help="comma-separated coefficients")
    p.add_argument("--order", choices=("ascending", "descending"), default="ascending")
    p = add("restrict", "restrict the combination to edges or the diagonal")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--edge", action="store_true")
    mode.add_argument("--diagonal", action="store_true")
    p = add("sample-variety", "random points with pinned E_1..E_k", problem="optional")
    p.add_argument("--n", type=int)
    p.add_argument("--gammas")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p = add("oracle", "brute-force grid extrema")
    p.add_argument("--resolution", type=int, default=101)
    p = add("verify", "randomized verification suites", problem="optional")
    p.add_argument("--theorem", type=int, choices=(1, 3), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--gammas")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    return parser


USER_ERRORS = (DomainError, EmptyDomainError, PreconditionError, NotHyperbolicError, SamplingExhausted)


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        spec = parse_problem(args.problem) if getattr(args, "problem", None) else None
        body = COMMANDS[args.command](args)
    except USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort reporting
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    report = {"command": args.command, "defaults": _defaults(spec)}
    if spec is not None:
        dom = spec.domain()
        report["problem"] = {"source": spec.source, "n": spec.n, "coeffs": list(spec.coeffs),
                             "gamma": spec.gamma, "gammas": list(spec.gammas) if spec.gammas else None,
                             "box": [[a, b] for a, b in zip(dom.lo, dom.hi)]}
    report.update(body)
    print(render(report, args.format), file=out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
