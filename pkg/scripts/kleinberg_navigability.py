"""Sweep the clustering exponent r of a Kleinberg grid and record greedy chain lengths.

Usage:
    python3 scripts/kleinberg_navigability.py --sides 50 100 --seeds 5 --trials 300
"""
import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from sociograph.generators import kleinberg_grid
from sociograph.routing import milgram_experiment


@dataclass
class SweepConfig:
    sides: list = field(default_factory=lambda: [50])
    exponents: list = field(default_factory=lambda: [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0])
    q: int = 1
    seeds: int = 5
    trials: int = 300
    max_hops: int | None = None  # default: 20 * side
    torus: bool = True


def run(cfg: SweepConfig, out=sys.stdout):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["side", "r", "seeds", "trials", "completion", "mean_chain", "sem", "seconds"])
    for side in cfg.sides:
        hops = cfg.max_hops or 20 * side
        for r in cfg.exponents:
            start = time.perf_counter()
            means, delivered = [], 0
            for seed in range(cfg.seeds):
                g, geo = kleinberg_grid(side, r, cfg.q, seed=seed, torus=cfg.torus)
                res = milgram_experiment(g, geo, cfg.trials, hops, seed=seed)
                delivered += res.delivered
                if res.mean_completed_length is not None:
                    means.append(res.mean_completed_length)
            sem = float(np.std(means, ddof=1) / np.sqrt(len(means))) if len(means) > 1 else 0.0
            writer.writerow([side, r, cfg.seeds, cfg.trials,
                             round(delivered / (cfg.seeds * cfg.trials), 4),
                             round(float(np.mean(means)), 3), round(sem, 3),
                             round(time.perf_counter() - start, 1)])
            out.flush()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sides", type=int, nargs="+", default=[50])
    ap.add_argument("--exponents", type=float, nargs="+")
    ap.add_argument("--q", type=int, default=1)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--max-hops", type=int)
    ap.add_argument("--bounded", action="store_true", help="use a bounded grid instead of a torus")
    args = ap.parse_args(argv)
    cfg = SweepConfig(sides=args.sides, q=args.q, seeds=args.seeds, trials=args.trials,
                      max_hops=args.max_hops, torus=not args.bounded)
    if args.exponents:
        cfg.exponents = args.exponents
    run(cfg)


if __name__ == "__main__":
    main()
