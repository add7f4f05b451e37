"""Run the random interior-point falsification suite for several n."""

import argparse
import time
from dataclasses import dataclass

from elemsym import verify_interior_suite


@dataclass
class Config:
    ns: tuple[int, ...] = (3, 4, 5)
    trials: int = 50
    points: int = 20
    seed: int = 0


def main(cfg: Config):
    print(f"{'n':>3} {'points':>7} {'falsified':>10} {'escalated':>10} {'skipped':>8} {'anomalies':>10} {'sec':>6}")
    for n in cfg.ns:
        t = time.perf_counter()
        r = verify_interior_suite(n, cfg.trials, cfg.seed, cfg.points)
        dt = time.perf_counter() - t
        print(f"{n:3d} {r.points_checked:7d} {r.falsified:10d} {r.escalated:10d} "
              f"{r.skipped_points:8d} {r.anomaly_count:10d} {dt:6.1f}")
        for a in r.anomalies:
            print(f"    anomaly: trial {a.trial}, gamma {a.gamma:.6g}, point {a.point}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", type=int, nargs="+", default=Config.ns)
    ap.add_argument("--trials", type=int, default=Config.trials)
    ap.add_argument("--points", type=int, default=Config.points)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    main(Config(tuple(a.ns), a.trials, a.points, a.seed))
