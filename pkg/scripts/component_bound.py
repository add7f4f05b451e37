"""Descend on {E_1 = g_1, ..., E_k = g_k} from random starts and tabulate how
many distinct coordinates the endpoints keep."""

import argparse
import time
from collections import Counter
from dataclasses import dataclass

from elemsym import verify_component_bound


@dataclass
class Config:
    ns: tuple[int, ...] = (4, 5, 6)
    gammas: tuple[float, ...] = (0.0, -2.0)
    trials: int = 20
    seed: int = 0


def main(cfg: Config):
    k = len(cfg.gammas)
    for n in cfg.ns:
        if n <= k:
            continue
        t = time.perf_counter()
        r = verify_component_bound(n, k, cfg.gammas, cfg.trials, cfg.seed)
        dt = time.perf_counter() - t
        hist = Counter(tr.components for tr in r.converged)
        print(f"n={n} k={k}: converged {len(r.converged)}/{cfg.trials}, components {dict(sorted(hist.items()))}, "
              f"over bound {len(r.violations)}, flagged {len(r.flagged)}, "
              f"max residual {r.max_residual:.2g}, {dt:.1f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", type=int, nargs="+", default=Config.ns)
    ap.add_argument("--gammas", type=float, nargs="+", default=Config.gammas)
    ap.add_argument("--trials", type=int, default=Config.trials)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    main(Config(tuple(a.ns), tuple(a.gammas), a.trials, a.seed))
