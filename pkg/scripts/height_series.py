"""Write log-height series along continued-fraction expansions as CSV.

Produces one file per input: random integer cusps at q = 7 (bounded, then
collapse on termination) and the point 2 at q = 11 (steady growth).

    python3 scripts/height_series.py --outdir heights/
"""

import argparse
import csv
import os
import random
from dataclasses import dataclass

from hecke.census import height_trajectory
from hecke.field import build_field_context


@dataclass
class HeightConfig:
    outdir: str = "heights"
    seed: int = 1
    cusps: int = 5
    magnitude: int = 10 ** 10
    growth_steps: int = 500


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--outdir", default="heights")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--cusps", type=int, default=5)
    p.add_argument("--magnitude", type=int, default=10 ** 10)
    p.add_argument("--growth-steps", type=int, default=500)
    cfg = HeightConfig(**vars(p.parse_args(argv)))
    os.makedirs(cfg.outdir, exist_ok=True)
    rng = random.Random(cfg.seed)
    jobs = [(7, rng.randint(cfg.magnitude, 2 * cfg.magnitude), 10 ** 5) for _ in range(cfg.cusps)]
    jobs.append((11, 2, cfg.growth_steps))
    for q, n, steps in jobs:
        tr = height_trajectory(build_field_context(q)(n), steps)
        path = os.path.join(cfg.outdir, f"q{q}_x{n}.csv")
        with open(path, "w", newline="") as fh:
            csv.writer(fh).writerows(tr.to_csv_rows())
        hs = [h for _, h in tr.steps]
        print(f"q={q} x={n}: {tr.status.value}, {len(hs)} points, log h {hs[0]:.2f} -> {hs[-1]:.2f} (max {max(hs):.2f})")


if __name__ == "__main__":
    main()
