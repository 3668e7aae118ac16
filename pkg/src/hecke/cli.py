"""Command-line entry point: ``hecke <subcommand> ...``.

Exit status 0 on success, 1 when a verification fails, 2 on usage errors.
Environment: HECKE_MAX_STEPS (default step budget), HECKE_PRECISION
(default bits for height enclosures).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys

from .census import (
    CoeffGrid,
    Integers,
    ScanSpec,
    SearchConstraints,
    UnitGrid,
    height_trajectory,
    power_of_two_constraints,
    read_period_table,
    run_census,
    search_periodic,
    spot_check_table,
)
from .expr import ExprError, parse_element
from .field import UndeterminedError, build_field_context
from .rosen import DEFAULT_MAX_STEPS, Status, expand, orbit_label

DEFAULT_PRECISION = int(os.environ.get("HECKE_PRECISION", "53"))
PRINT_DIGITS = 1000


class UsageError(Exception):
    def __init__(self, flag, message):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def _context(q, flag="--q"):
    if q < 3:
        raise UsageError(flag, "q must be at least 3")
    return build_field_context(q)


def _element(src, ctx, flag="EXPR"):
    try:
        return parse_element(src, ctx)
    except ExprError as exc:
        raise UsageError(flag, str(exc)) from None


_RANGE = r"(-?\d+)\.\.(-?\d+)"


def parse_set(src, q, premul=None):
    """``int:A..B``, ``units:G1,G2:A..B`` or ``grid:B1,B2:A..B``."""
    m = re.fullmatch(r"int:" + _RANGE, src)
    try:
        if m:
            return ScanSpec(q, Integers(int(m.group(1)), int(m.group(2))), premul)
        m = re.fullmatch(r"(units|grid):([^:]+):" + _RANGE, src)
        if not m:
            raise UsageError("--set", f"cannot parse {src!r}")
        names = tuple(n.strip() for n in m.group(2).split(","))
        lo, hi = int(m.group(3)), int(m.group(4))
        kind = UnitGrid(names, lo, hi) if m.group(1) == "units" else CoeffGrid(names, lo, hi)
        return ScanSpec(q, kind, premul)
    except (ValueError, ExprError) as exc:
        raise UsageError("--set", str(exc)) from None


def _dump(obj, out):
    json.dump(obj, out, sort_keys=True)
    out.write("\n")


def _expansion_record(src, x, e, ctx):
    label = orbit_label(e, ctx)
    return {
        "q": ctx.q,
        "input": src,
        "value": str(x),
        "status": e.status.value,
        "steps": e.steps,
        "digits": list(e.digits[:PRINT_DIGITS]),
        "digits_truncated": e.steps > PRINT_DIGITS,
        "preperiod": e.preperiod,
        "period": list(e.period),
        "special": label.special,
        "label": str(label),
    }


def cmd_expand(args, out):
    ctx = _context(args.q)
    x = _element(args.expr, ctx)
    e = expand(x, max_steps=args.max_steps)
    rec = _expansion_record(args.expr, x, e, ctx)
    if args.json:
        _dump(rec, out)
        return 0
    print(f"status: {rec['status']} after {rec['steps']} steps", file=out)
    if e.status is Status.PREPERIODIC:
        print(f"preperiod: {list(e.digits[:e.preperiod])}", file=out)
        print(f"period: [{','.join(map(str, e.period))}], special={str(rec['special']).lower()}", file=out)
    else:
        print(f"digits: {rec['digits']}", file=out)
    return 0


def cmd_classify(args, out):
    ctx = _context(args.q)
    x = _element(args.expr, ctx)
    e = expand(x, max_steps=args.max_steps)
    label = orbit_label(e, ctx)
    if label.kind == "cusp":
        print(f"cusp, digits [{','.join(map(str, e.digits))}]", file=out)
    elif label.kind == "hyperbolic":
        kind = {True: "special hyperbolic", False: "hyperbolic, not special", None: "hyperbolic, specialness undetermined"}
        print(f"{kind[label.special]}, class [{','.join(map(str, label.symmetry_label))}]", file=out)
    else:
        print(f"undetermined after {e.steps} steps", file=out)
    return 0


def _write_rows(rows, path, out):
    if path:
        with open(path, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)
    else:
        csv.writer(out).writerows(rows)


def cmd_census(args, out):
    _context(args.q)
    spec = parse_set(args.set, args.q, args.premul)
    cache = None
    if args.cache:
        from .cache import ExpansionCache

        cache = ExpansionCache(args.cache)
    try:
        report = run_census(spec, args.max_steps, workers=args.threads, checkpoint=args.checkpoint, cache=cache)
    except ValueError as exc:
        raise UsageError("--checkpoint", str(exc)) from None
    if args.json:
        _dump(report.to_json(), out)
    else:
        _write_rows(report.to_csv_rows(), args.out, out)
    return 0


def cmd_verify_families(args, out):
    from .traces import verify_family
    from .words import G18_FAMILIES

    if args.q != 18:
        raise UsageError("--q", "the bundled families live in G_18")
    if args.kmax < 0:
        raise UsageError("--kmax", "must be non-negative")
    ctx = _context(18)
    ok = True
    for f in G18_FAMILIES:
        v = verify_family(f, args.kmax, ctx)
        ok &= v.ok
        _dump(v.to_json(), out)
    return 0 if ok else 1


def cmd_search_periodic(args, out):
    _context(args.q)
    if args.length < 1:
        raise UsageError("--length", "must be positive")
    if args.paper_constraints:
        if args.length % 4:
            raise UsageError("--length", "the power-of-two constraint set needs a multiple of 4")
        constraints = power_of_two_constraints(args.length)
    else:
        if not args.digits:
            raise UsageError("--digits", "required without --paper-constraints")
        try:
            digits = tuple(int(d) for d in args.digits.split(","))
        except ValueError:
            raise UsageError("--digits", f"cannot parse {args.digits!r}") from None
        constraints = SearchConstraints(balanced_signs=args.balanced, product=args.product, digits=digits)
    results = search_periodic(args.q, args.length, constraints, workers=args.threads)
    _dump({"q": args.q, "length": args.length, "count": len(results),
           "classes": [r.to_json() for r in results]}, out)
    return 0


def cmd_heights(args, out):
    ctx = _context(args.q)
    x = _element(args.expr, ctx)
    if args.steps < 1:
        raise UsageError("--steps", "must be positive")
    tr = height_trajectory(x, args.steps, args.precision)
    _write_rows(tr.to_csv_rows(), args.out, out)
    if args.out:
        print(f"{tr.status.value}: {len(tr.steps)} heights written to {args.out}", file=out)
    return 0


def cmd_spot_check(args, out):
    _context(args.q)
    try:
        rows = [r for r in read_period_table(args.table) if r.q == args.q]
    except (OSError, ValueError) as exc:
        raise UsageError("--table", str(exc)) from None
    if not rows:
        raise UsageError("--q", f"no table rows for q={args.q}")
    ctx = build_field_context(args.q)
    ok = True
    for r in rows:
        passed = spot_check_table(args.q, _element(r.element, ctx, "--table"), r.period, args.max_steps)
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {r.element} -> [{','.join(map(str, r.period))}]", file=out)
    return 0 if ok else 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(self.prog, message)


def build_parser():
    p = _Parser(prog="hecke", description="Hecke group continued fractions and orbit censuses.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def steps(sp):
        sp.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)

    sp = sub.add_parser("expand", help="lambda-continued fraction of an element")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("expr")
    steps(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("classify", help="orbit type of an element")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("expr")
    steps(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("census", help="count orbit labels over a scan set")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--set", required=True, help="int:A..B | units:G1,G2:A..B | grid:B1,B2:A..B")
    sp.add_argument("--premul")
    sp.add_argument("--out")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--checkpoint")
    sp.add_argument("--cache")
    sp.add_argument("--threads", type=int, default=1, help="worker processes")
    steps(sp)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("verify-families", help="check the bundled q=18 families")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--kmax", type=int, default=3)
    sp.set_defaults(func=cmd_verify_families)

    sp = sub.add_parser("search-periodic", help="special periodic parts of a given length")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--paper-constraints", action="store_true",
                    help="entries +-2^k, balanced signs, product 2^length")
    sp.add_argument("--digits", help="allowed entries, comma separated")
    sp.add_argument("--balanced", action="store_true")
    sp.add_argument("--product", type=int)
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_search_periodic)

    sp = sub.add_parser("heights", help="log heights along an expansion")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("expr")
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    sp.set_defaults(func=cmd_heights)

    sp = sub.add_parser("spot-check", help="check table rows for one q")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--table", help="table file (default: bundled)")
    sp.add_argument("--max-steps", type=int, default=10 ** 4)
    sp.set_defaults(func=cmd_spot_check)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "max_steps", 1) < 1:
            raise UsageError("--max-steps", "must be positive")
        return args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except UndeterminedError as exc:
        print(f"undetermined: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
