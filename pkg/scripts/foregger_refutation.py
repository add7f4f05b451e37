"""Probe p0 = (1/2, 1/2, 1/4) for phi = E_3 - E_2/2 on its box slice and
compare with the global maximum.

    python scripts/foregger_refutation.py --radii 1e-2 1e-3 1e-4 1e-5
"""

import argparse
from dataclasses import dataclass

from elemsym import BoxDomain, SymCombo, eval_combo, falsify_local_extremum, solve_global


@dataclass
class Config:
    radii: tuple[float, ...] = (1e-2, 1e-3, 1e-4)
    samples: int = 512
    seed: int = 0


def main(cfg: Config):
    phi = SymCombo(3, (0.0, 0.0, -0.5, 1.0))
    dom = BoxDomain((0.375, 0.375, 0.125), (0.625, 0.625, 0.375), 1.25)
    p0 = (0.5, 0.5, 0.25)
    print(f"phi(p0) = {eval_combo(phi, p0):.17g}")
    v = falsify_local_extremum(dom, phi, p0, cfg.radii, cfg.samples, cfg.seed)
    print(f"status: {v.status.value}")
    print(f"{'radius':>10} {'rise':>12} {'fall':>12} {'rise/r^2':>10} {'fall/r^2':>10}")
    for pr in v.probes:
        rise = pr.ascent.value - v.value if pr.ascent else 0.0
        fall = v.value - pr.descent.value if pr.descent else 0.0
        r2 = pr.radius**2
        print(f"{pr.radius:10.0e} {rise:12.4e} {fall:12.4e} {rise / r2:10.4f} {fall / r2:10.4f}")
    rep = solve_global(dom, phi)
    print(f"global max {rep.max_value:.17g} at {[c.point for c in rep.max_points]}")
    print(f"global min {rep.min_value:.17g} at {[c.point for c in rep.min_points]}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radii", type=float, nargs="+", default=Config.radii)
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    main(Config(tuple(a.radii), a.samples, a.seed))
