"""Orbit censuses, heights along continued-fraction trajectories, and periodic-part searches."""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from importlib import resources
from typing import Optional

from .expr import parse_digits, parse_element
from .field import FieldElement, UndeterminedError, build_field_context, embed_all, in_lambda_Q_lambda2
from .group import Kind, classify
from .rosen import (
    CUSP,
    UNKNOWN,
    OrbitLabel,
    Status,
    evaluate_periodic,
    expand,
    orbit_label,
    period_matrix,
    validate_period,
)
from .words import primitive_period, satisfies_conj_hypotheses, symmetry_class, symmetry_images

CHECKPOINT_FORMAT = "hecke-census-checkpoint/1"


# ---------------------------------------------------------------- heights

def _content_reduce(p: FieldElement, r: FieldElement):
    """Scale the pair by a rational so the combined coefficients are coprime integers."""
    den = p.den * r.den // math.gcd(p.den, r.den)
    ints = [n * (den // p.den) for n in p.num] + [n * (den // r.den) for n in r.num]
    g = reduce(math.gcd, ints, 0)
    if g == 0:
        raise ValueError("height of the zero pair is undefined")
    scale = Fraction(den, g)
    return p * scale, r * scale


def _abs_interval(lo, hi):
    if lo >= 0:
        return lo, hi
    if hi <= 0:
        return -hi, -lo
    return Fraction(0), max(-lo, hi)


def _height_factors(p, r, precision):
    """Certified intervals for |s(p)| + |s(r)| at every embedding s."""
    while True:
        out = []
        ok = True
        for (plo, phi), (rlo, rhi) in zip(embed_all(p, precision), embed_all(r, precision)):
            a_lo, a_hi = _abs_interval(plo, phi)
            b_lo, b_hi = _abs_interval(rlo, rhi)
            lo, hi = a_lo + b_lo, a_hi + b_hi
            # ask for about 30 bits of relative accuracy in each factor
            if lo <= 0 or (hi - lo) * (1 << 30) > lo:
                ok = False
                break
            out.append((lo, hi))
        if ok:
            return out
        precision *= 2


def height_enclosure(p: FieldElement, r: FieldElement, precision: int = 53):
    """Rational interval containing h([p : r]) after rational content reduction."""
    p, r = _content_reduce(p, r)
    lo = hi = Fraction(1)
    for f_lo, f_hi in _height_factors(p, r, precision):
        lo *= f_lo
        hi *= f_hi
    return lo, hi


def height(p: FieldElement, r: FieldElement, precision: int = 53) -> float:
    lo, hi = height_enclosure(p, r, precision)
    return float((lo + hi) / 2)


def _log_fraction(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def log_height(p: FieldElement, r: FieldElement, precision: int = 53) -> float:
    """log h([p : r]); safe for heights far beyond float range."""
    p, r = _content_reduce(p, r)
    return sum(_log_fraction((lo + hi) / 2) for lo, hi in _height_factors(p, r, precision))


@dataclass
class HeightTrajectory:
    x: FieldElement
    steps: list  # (index, log_height) for tails 0..n; a cusp ends with the tail oo
    status: Status
    digits: tuple = ()

    def to_csv_rows(self):
        return [("step", "log_height")] + [(i, f"{h:.12g}") for i, h in self.steps]


def height_trajectory(x: FieldElement, max_steps: int = 1000, precision: int = 53) -> HeightTrajectory:
    """log h of tail/l at every step of the expansion of x.

    The tail is carried as an exact pair (P, R) with tail = P/R, updated by
    the inverse digit map (P, R) -> (-R, P - a l R).
    """
    ctx = x.ctx
    e = expand(x, max_steps=max_steps)
    p, r = _content_reduce(x, ctx.one)
    steps = [(0, log_height(p, r.times_lambda(), precision))]
    for i, a in enumerate(e.digits, start=1):
        p, r = -r, p - (r * a).times_lambda()
        if r.is_zero():
            steps.append((i, 0.0))
            break
        p, r = _content_reduce(p, r)
        steps.append((i, log_height(p, r.times_lambda(), precision)))
    return HeightTrajectory(x, steps, e.status, e.digits)


# ---------------------------------------------------------------- census

@dataclass(frozen=True)
class Integers:
    lo: int
    hi: int


@dataclass(frozen=True)
class UnitGrid:
    gen_names: tuple
    lo: int
    hi: int


@dataclass(frozen=True)
class CoeffGrid:
    basis_names: tuple
    lo: int
    hi: int


@dataclass(frozen=True)
class ScanSpec:
    q: int
    set_kind: object  # Integers | UnitGrid | CoeffGrid
    premultiplier: Optional[str] = None  # expression, e.g. "l"

    def __post_init__(self):
        k = self.set_kind
        if k.hi < k.lo:
            raise ValueError("empty scan range")
        names = getattr(k, "gen_names", None) or getattr(k, "basis_names", None) or ()
        if not isinstance(k, Integers) and not names:
            raise ValueError("grid scans need at least one name")
        ctx = self.ctx
        for name in names:
            parse_element(name, ctx)
        if self.premultiplier is not None and parse_element(self.premultiplier, ctx) == 0:
            raise ValueError("premultiplier must be nonzero")

    @property
    def ctx(self):
        return build_field_context(self.q)

    def size(self):
        k = self.set_kind
        width = k.hi - k.lo + 1
        if isinstance(k, Integers):
            return width
        names = k.gen_names if isinstance(k, UnitGrid) else k.basis_names
        return width ** len(names)

    def points(self, start: int = 0):
        """Yield ``(index, element)`` in scan order, beginning at ``start``."""
        ctx = self.ctx
        k = self.set_kind
        pre = parse_element(self.premultiplier, ctx) if self.premultiplier else ctx.one
        if isinstance(k, Integers):
            for n in range(k.lo + start, k.hi + 1):
                yield n - k.lo, pre * n
            return
        rng = range(k.lo, k.hi + 1)
        if isinstance(k, UnitGrid):
            gens = [parse_element(g, ctx) for g in k.gen_names]
            for idx, exps in enumerate(itertools.product(rng, repeat=len(gens))):
                if idx >= start:
                    yield idx, reduce(lambda acc, ge: acc * ge[0] ** ge[1], zip(gens, exps), pre)
        else:
            basis = [parse_element(b, ctx) for b in k.basis_names]
            for idx, coeffs in enumerate(itertools.product(rng, repeat=len(basis))):
                if idx >= start:
                    total = ctx.zero
                    for b, c in zip(basis, coeffs):
                        if c:
                            total = total + b * c
                    yield idx, pre * total

    def to_json(self):
        k = self.set_kind
        kind = {Integers: "int", UnitGrid: "units", CoeffGrid: "grid"}[type(k)]
        names = list(getattr(k, "gen_names", ()) or getattr(k, "basis_names", ()))
        return {"q": self.q, "kind": kind, "names": names, "lo": k.lo, "hi": k.hi,
                "premultiplier": self.premultiplier}

    @classmethod
    def from_json(cls, data):
        names = tuple(data.get("names", ()))
        kind = {"int": lambda: Integers(data["lo"], data["hi"]),
                "units": lambda: UnitGrid(names, data["lo"], data["hi"]),
                "grid": lambda: CoeffGrid(names, data["lo"], data["hi"])}[data["kind"]]()
        return cls(data["q"], kind, data.get("premultiplier"))


@dataclass
class CensusRow:
    label: OrbitLabel
    count: int
    first_index: int
    representative: FieldElement


@dataclass
class CensusReport:
    q: int
    rows: dict = field(default_factory=dict)  # OrbitLabel -> CensusRow
    undetermined: int = 0
    undetermined_first: Optional[int] = None
    total: int = 0

    def add(self, index, x, label):
        self.total += 1
        if label is UNKNOWN or label.kind == "unknown":
            self.undetermined += 1
            if self.undetermined_first is None or index < self.undetermined_first:
                self.undetermined_first = index
            return
        row = self.rows.get(label)
        if row is None:
            self.rows[label] = CensusRow(label, 1, index, x)
        else:
            row.count += 1
            if index < row.first_index:
                row.first_index, row.representative = index, x

    def merge(self, other: "CensusReport") -> "CensusReport":
        out = CensusReport(self.q)
        for rep in (self, other):
            out.total += rep.total
            out.undetermined += rep.undetermined
            for f in (rep.undetermined_first,):
                if f is not None and (out.undetermined_first is None or f < out.undetermined_first):
                    out.undetermined_first = f
            for label, row in rep.rows.items():
                mine = out.rows.get(label)
                if mine is None:
                    out.rows[label] = CensusRow(label, row.count, row.first_index, row.representative)
                else:
                    mine.count += row.count
                    if row.first_index < mine.first_index:
                        mine.first_index, mine.representative = row.first_index, row.representative
        return out

    def sorted_rows(self):
        return sorted(self.rows.values(), key=lambda r: (-r.count, r.label.sort_key()))

    def count(self, label):
        row = self.rows.get(label)
        return row.count if row else 0

    def non_cusp_rows(self):
        return [r for r in self.sorted_rows() if r.label != CUSP]

    def to_csv_rows(self):
        out = [("label", "special", "count", "representative")]
        for r in self.sorted_rows():
            special = "" if r.label.special is None else str(r.label.special).lower()
            out.append((str(r.label), special, r.count, str(r.representative)))
        if self.undetermined:
            out.append(("undetermined", "", self.undetermined, ""))
        return out

    def to_json(self):
        return {
            "q": self.q,
            "total": self.total,
            "undetermined": self.undetermined,
            "undetermined_first": self.undetermined_first,
            "rows": [
                {"kind": r.label.kind, "cycle": list(r.label.cycle), "special": r.label.special,
                 "count": r.count, "first_index": r.first_index,
                 "representative": r.representative.to_json()}
                for r in self.sorted_rows()
            ],
        }

    @classmethod
    def from_json(cls, data):
        ctx = build_field_context(data["q"])
        rep = cls(data["q"], undetermined=data["undetermined"],
                  undetermined_first=data["undetermined_first"], total=data["total"])
        for r in data["rows"]:
            if r["kind"] == "cusp":
                label = CUSP
            else:
                cycle = tuple(r["cycle"])
                label = OrbitLabel(r["kind"], cycle, r["special"], symmetry_class(cycle))
            rep.rows[label] = CensusRow(label, r["count"], r["first_index"],
                                        FieldElement.from_json(ctx, r["representative"]))
        return rep


def _label_of(x, max_steps):
    return orbit_label(expand(x, max_steps=max_steps), x.ctx)


def _label_batch(args):
    points, max_steps = args
    return [(i, _label_of(x, max_steps)) for i, x in points]


def _labels_with_cache(points, max_steps, cache, pool, chunk):
    """Labels for a block of points; the cache is touched only from this process."""
    ctx = points[0][1].ctx if points else None
    labels = {}
    misses = []
    for i, x in points:
        e = cache.get(x, max_steps) if cache is not None else None
        if e is not None:
            labels[i] = orbit_label(e, ctx)
        else:
            misses.append((i, x))
    if cache is not None:
        computed = []
        for i, x in misses:
            e = expand(x, max_steps=max_steps)
            cache.put(x, e)
            computed.append((i, orbit_label(e, ctx)))
    elif pool is not None:
        batches = [(misses[j:j + chunk], max_steps) for j in range(0, len(misses), chunk)]
        computed = [item for part in pool.map(_label_batch, batches) for item in part]
    else:
        computed = _label_batch((misses, max_steps))
    labels.update(computed)
    return labels


def _read_checkpoint(path, spec, max_steps):
    if not path or not os.path.exists(path):
        return 0, None
    with open(path) as fh:
        data = json.load(fh)
    if data.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"{path}: not a census checkpoint")
    if data["spec"] != spec.to_json() or data["max_steps"] != max_steps:
        raise ValueError(f"{path}: checkpoint belongs to a different scan")
    return data["next_index"], CensusReport.from_json(data["report"])


def _write_checkpoint(path, spec, max_steps, next_index, report):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"format": CHECKPOINT_FORMAT, "spec": spec.to_json(), "max_steps": max_steps,
                   "next_index": next_index, "report": report.to_json()}, fh)
    os.replace(tmp, path)


def run_census(spec: ScanSpec, max_steps: int = None, workers: int = 1, checkpoint: str = None,
               block: int = 2000, cache=None, progress=None) -> CensusReport:
    """Expand every point of the scan and count points per orbit label.

    With ``checkpoint`` the scan runs in blocks and can resume after an
    interruption. ``workers > 1`` uses a process pool; the result does not
    depend on it. A cache, if given, is read and written from this process only.
    """
    start, report = _read_checkpoint(checkpoint, spec, max_steps)
    if report is None:
        report = CensusReport(spec.q)
    size = spec.size()
    pool = ProcessPoolExecutor(workers) if workers > 1 and cache is None else None
    chunk = max(1, block // (4 * max(workers, 1)))
    try:
        it = spec.points(start)
        while start < size:
            points = list(itertools.islice(it, block))
            if not points:
                break
            labels = _labels_with_cache(points, max_steps, cache, pool, chunk)
            for i, x in points:
                report.add(i, x, labels[i])
            start = points[-1][0] + 1
            if checkpoint:
                _write_checkpoint(checkpoint, spec, max_steps, start, report)
            if progress:
                progress(start, size)
    finally:
        if pool is not None:
            pool.shutdown()
    return report


# ---------------------------------------------------------------- periodic searches

@dataclass(frozen=True)
class SearchConstraints:
    """Filters on candidate periods.

    ``powers_of_two``: every entry is +-2^k. ``balanced_signs``: as many
    negative entries as positive. ``product``: required product of all
    entries. ``digits`` lists allowed entries when not restricted to powers of two.
    """

    powers_of_two: bool = False
    balanced_signs: bool = False
    product: Optional[int] = None
    digits: Optional[tuple] = None

    def admits(self, seq):
        if any(a == 0 for a in seq):
            return False
        if self.powers_of_two and any(abs(a) & (abs(a) - 1) for a in seq):
            return False
        if self.digits is not None and any(a not in self.digits for a in seq):
            return False
        if self.balanced_signs and 2 * sum(a < 0 for a in seq) != len(seq):
            return False
        return self.product is None or math.prod(seq) == self.product


def power_of_two_constraints(length):
    """Entries +-2^k, balanced signs, product 2^length."""
    return SearchConstraints(powers_of_two=True, balanced_signs=True, product=2 ** length)


def _power_of_two_sequences(length, c: SearchConstraints):
    if c.product is None:
        raise ValueError("power-of-two enumeration needs a product constraint")
    mag = abs(c.product)
    if mag == 0 or mag & (mag - 1):
        return
    total = mag.bit_length() - 1
    negative_parity = c.product < 0
    if c.balanced_signs:
        if length % 2:
            return
        sign_sets = itertools.combinations(range(length), length // 2)
    else:
        sign_sets = (s for n in range(length + 1) for s in itertools.combinations(range(length), n))
    sign_sets = [s for s in sign_sets if (len(s) % 2 == 1) == negative_parity]
    if not sign_sets:
        return
    # compositions of `total` into `length` non-negative parts via stars and bars
    for bars in itertools.combinations(range(total + length - 1), length - 1):
        prev = -1
        exps = []
        for b in bars:
            exps.append(b - prev - 1)
            prev = b
        exps.append(total + length - 2 - prev)
        mags = [1 << e for e in exps]
        for neg in sign_sets:
            seq = list(mags)
            for j in neg:
                seq[j] = -seq[j]
            yield tuple(seq)


def enumerate_sequences(length, c: SearchConstraints):
    if c.powers_of_two and c.digits is None:
        yield from _power_of_two_sequences(length, c)
        return
    if c.digits is None:
        raise ValueError("generic constraints need an explicit digit set")
    for seq in itertools.product(sorted(c.digits), repeat=length):
        if c.admits(seq):
            yield seq


@dataclass(frozen=True)
class SearchResult:
    symmetry_class: tuple
    period: tuple  # a member of the class that is a genuine continued-fraction period
    fixed_point: FieldElement
    conj_hypotheses: bool

    def to_json(self):
        return {
            "class": list(self.symmetry_class),
            "period": list(self.period),
            "fixed_point": str(self.fixed_point),
            "fixed_point_in_lQl2": in_lambda_Q_lambda2(self.fixed_point),
            "conj_hypotheses": self.conj_hypotheses,
        }


def candidate_classes(length, constraints):
    """Distinct symmetry classes of primitive sequences meeting the constraints."""
    classes = set()
    for seq in enumerate_sequences(length, constraints):
        if constraints.admits(seq) and primitive_period(seq) == seq:
            classes.add(symmetry_class(seq))
    return sorted(classes)


def check_class(cls, ctx):
    """SearchResult for a symmetry class, or None if no member is a special periodic CF."""
    m = period_matrix(cls, ctx)
    try:
        spectral = classify(m)
    except UndeterminedError:
        return None
    if spectral.kind is not Kind.HYPERBOLIC or not spectral.special:
        return None
    for member in sorted(set(symmetry_images(cls))):
        try:
            if validate_period(member, ctx):
                x = evaluate_periodic(member, ctx)
                return SearchResult(cls, member, x, satisfies_conj_hypotheses(cls, ctx.q))
        except UndeterminedError:
            continue
    return None


def search_periodic(q, length, constraints: SearchConstraints = None, workers: int = 1):
    """Special hyperbolic symmetry classes of periodic CFs of the given length."""
    if constraints is None:
        constraints = power_of_two_constraints(length)
    ctx = build_field_context(q)
    classes = candidate_classes(length, constraints)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(check_class, classes, itertools.repeat(ctx), chunksize=64))
    else:
        results = [check_class(c, ctx) for c in classes]
    return sorted((r for r in results if r is not None), key=lambda r: (len(r.symmetry_class), r.symmetry_class))


# ---------------------------------------------------------------- table checks

def spot_check_table(q, representative: FieldElement, expected_period, max_steps: int = 10 ** 4) -> bool:
    """The expansion of ``representative`` is preperiodic with a period in the class of ``expected_period``."""
    if representative.ctx.q != q:
        raise ValueError("representative lives in a different field")
    e = expand(representative, max_steps=max_steps)
    return e.status is Status.PREPERIODIC and symmetry_class(e.period) == symmetry_class(expected_period)


@dataclass(frozen=True)
class TableRow:
    q: int
    element: str
    period: tuple


def read_period_table(path=None):
    """Rows ``q | element | period`` from a table file (default: the bundled table)."""
    if path is None:
        text = resources.files("hecke").joinpath("data/periodic_table.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'q | element | period'")
        rows.append(TableRow(int(parts[0]), parts[1], tuple(parse_digits(parts[2]))))
    return rows


def read_period_list(path=None):
    """One period per line; the default is the bundled q = 18 list."""
    if path is None:
        text = resources.files("hecke").joinpath("data/q18_periods.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return [tuple(parse_digits(l)) for l in text.splitlines() if l.strip() and not l.startswith("#")]
