"""Check every bundled periodic-table row and rerun the q = 18 searches.

    python3 scripts/reproduce_tables.py            # lengths 4 and 8
    python3 scripts/reproduce_tables.py --lengths 4 8 12 --workers 4
"""

import argparse
import json
import time
from dataclasses import dataclass, field

from hecke.census import read_period_list, read_period_table, search_periodic, spot_check_table
from hecke.expr import parse_element
from hecke.field import build_field_context
from hecke.words import symmetry_class


@dataclass
class TableConfig:
    lengths: list = field(default_factory=lambda: [4, 8])
    workers: int = 1
    max_steps: int = 10 ** 4
    json_out: str = ""


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--lengths", type=int, nargs="+", default=[4, 8])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-steps", type=int, default=10 ** 4)
    p.add_argument("--json-out", default="")
    cfg = TableConfig(**vars(p.parse_args(argv)))

    ok = True
    for row in read_period_table():
        ctx = build_field_context(row.q)
        t = time.perf_counter()
        passed = spot_check_table(row.q, parse_element(row.element, ctx), row.period, cfg.max_steps)
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  q={row.q:<3d} len={len(row.period):<4d} "
              f"{time.perf_counter() - t:6.2f}s  {row.element}")

    listed = read_period_list()
    dump = {}
    for length in cfg.lengths:
        t = time.perf_counter()
        found = search_periodic(18, length, workers=cfg.workers)
        got = {r.symmetry_class for r in found}
        want = {symmetry_class(c) for c in listed if len(c) == length}
        ok &= got == want
        print(f"q=18 length {length}: {len(got)} classes in {time.perf_counter() - t:.1f}s; "
              f"listed {len(want)}, missing {len(want - got)}, extra {len(got - want)}")
        for r in found:
            flag = "" if r.conj_hypotheses else "  (outside the rotation-conjugacy hypotheses)"
            print(f"    {list(r.period)}{flag}")
        dump[length] = [r.to_json() for r in found]
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump(dump, fh, indent=1)
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
