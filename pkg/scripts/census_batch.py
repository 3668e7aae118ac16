"""Long-running orbit census with a resumable checkpoint.

Default: all integers in [1, 10^6] at q = 7, which takes hours on one core.
Interrupt at any time; rerunning with the same checkpoint continues.

    python3 scripts/census_batch.py --hi 30000 --out q7_int.csv
"""

import argparse
import csv
import sys
import time
from dataclasses import dataclass, fields

from hecke.census import CoeffGrid, Integers, ScanSpec, UnitGrid, run_census


@dataclass
class CensusConfig:
    q: int = 7
    kind: str = "int"  # int | units | grid
    names: str = ""  # comma-separated generators or basis elements
    lo: int = 1
    hi: int = 10 ** 6
    premul: str = ""
    max_steps: int = 100000
    workers: int = 1
    checkpoint: str = "census.ckpt.json"
    out: str = "census.csv"


def parse_config(argv):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for f in fields(CensusConfig):
        p.add_argument("--" + f.name.replace("_", "-"), type=type(f.default), default=f.default)
    return CensusConfig(**vars(p.parse_args(argv)))


def spec_for(cfg):
    names = tuple(n for n in cfg.names.split(",") if n)
    kind = {"int": lambda: Integers(cfg.lo, cfg.hi),
            "units": lambda: UnitGrid(names, cfg.lo, cfg.hi),
            "grid": lambda: CoeffGrid(names, cfg.lo, cfg.hi)}[cfg.kind]()
    return ScanSpec(cfg.q, kind, cfg.premul or None)


def main(argv=None):
    cfg = parse_config(argv)
    spec = spec_for(cfg)
    start = time.time()

    def progress(done, total):
        rate = done / max(time.time() - start, 1e-9)
        print(f"\r{done}/{total}  ({rate:.0f} points/s)", end="", file=sys.stderr, flush=True)

    report = run_census(spec, cfg.max_steps, workers=cfg.workers, checkpoint=cfg.checkpoint, progress=progress)
    print(file=sys.stderr)
    with open(cfg.out, "w", newline="") as fh:
        csv.writer(fh).writerows(report.to_csv_rows())
    for row in report.non_cusp_rows()[:20]:
        print(f"{row.count:8d}  {row.label}  first={row.representative}")
    print(f"total {report.total}, undetermined {report.undetermined}")


if __name__ == "__main__":
    main()
