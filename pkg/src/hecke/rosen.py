"""Rosen lambda-continued fractions with exact arithmetic.

Each step writes the current tail as ``x = a*l + r`` with ``r`` in
``(-l/2, l/2]`` and continues with ``-1/r``. The expansion stops when a
remainder vanishes (a cusp), when a tail repeats (preperiodic), or after
``max_steps`` digits.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Optional

from .field import FieldElement, UndeterminedError, _enclosure, sign_at
from .group import (
    INF,
    GroupMatrix,
    Kind,
    NotHyperbolicError,
    classify,
    fixed_points_exact,
    fixed_points_numeric,
    generator,
    mobius_apply,
    st_product,
    t_power,
)
from .words import canonical_cycle, primitive_period, symmetry_class

DEFAULT_MAX_STEPS = int(os.environ.get("HECKE_MAX_STEPS", "100000"))


class Status(enum.Enum):
    FINITE = "finite"
    PREPERIODIC = "preperiodic"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class CFExpansion:
    digits: tuple
    status: Status
    preperiod: int = 0
    period: tuple = ()
    tails: Optional[tuple] = field(default=None, compare=False, repr=False)

    @property
    def steps(self):
        return len(self.digits)

    @property
    def eventual_tail_index(self):
        return self.preperiod


def _ceil_div(n, d):
    return -((-n) // d)


def rosen_digit(x: FieldElement):
    """Nearest multiple of l with the remainder in ``(-l/2, l/2]``.

    Returns ``(a, x - a*l)``.
    """
    ctx = x.ctx
    lam = ctx.lam
    half = lam / 2
    value, _, scale = _enclosure(x, 0, 64)
    # x/l - 1/2 ~ num/den - 1/2
    if ctx.degree == 1:
        exact = ctx._exact_root
        num, den = value * exact.denominator, x.den * exact.numerator
    else:
        num, den = value << 64, scale * x.den * ctx.root_approx(0, 64)
    a = _ceil_div(2 * num - den, 2 * den)
    while True:
        r = x - lam * a
        if sign_at(r + half) <= 0:
            a -= 1
        elif sign_at(half - r) < 0:
            a += 1
        else:
            return a, r


def expand(x, max_steps: int = None, keep_tails: bool = False) -> CFExpansion:
    """Run the lambda-continued fraction algorithm on a point of P^1(K)."""
    if max_steps is None:
        max_steps = DEFAULT_MAX_STEPS
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    if x is INF:
        return CFExpansion((), Status.FINITE, tails=() if keep_tails else None)
    digits = []
    seen = {}
    tails = [] if keep_tails else None
    cur = x
    for step in range(max_steps):
        key = (cur.num, cur.den)
        first = seen.get(key)
        if first is not None:
            period = primitive_period(tuple(digits[first:]))
            return CFExpansion(
                tuple(digits), Status.PREPERIODIC, first, period,
                tuple(tails) if keep_tails else None,
            )
        seen[key] = step
        if keep_tails:
            tails.append(cur)
        a, r = rosen_digit(cur)
        digits.append(a)
        if r.is_zero():
            return CFExpansion(tuple(digits), Status.FINITE, tails=tuple(tails) if keep_tails else None)
        cur = -r.inverse()
    return CFExpansion(tuple(digits), Status.UNDETERMINED, tails=tuple(tails) if keep_tails else None)


def digits_matrix(digits, ctx) -> GroupMatrix:
    """T^{a_0} S T^{a_1} S ... T^{a_N} S, the map taking the final tail back to x."""
    m = GroupMatrix.identity(ctx)
    s = generator("S", ctx)
    for a in digits:
        m = m @ t_power(ctx, a) @ s
    return m


def evaluate_finite(digits, ctx):
    """Exact value of the finite expansion [a_0, ..., a_N] (INF when empty)."""
    return mobius_apply(digits_matrix(digits, ctx), INF)


def period_matrix(period, ctx) -> GroupMatrix:
    """S T^{-a_n} ... S T^{-a_0}, which fixes the periodic point with this period."""
    return st_product([-a for a in period], ctx)


def evaluate_periodic(period, ctx):
    """Exact purely periodic point with the given (special) period.

    The shift along one period is expanding at the point, so it is the
    repelling fixed point of ``period_matrix``.
    """
    m = period_matrix(period, ctx)
    return fixed_points_exact(m).repelling


@dataclass(frozen=True)
class OrbitLabel:
    kind: str  # "cusp", "hyperbolic" or "unknown"
    cycle: tuple = ()
    special: Optional[bool] = None
    symmetry_label: tuple = ()

    def __str__(self):
        if self.kind == "hyperbolic":
            return "hyp[" + ",".join(map(str, self.cycle)) + "]"
        return self.kind

    def sort_key(self):
        order = {"cusp": 0, "hyperbolic": 1, "unknown": 2}[self.kind]
        return (order, len(self.cycle), self.cycle)


CUSP = OrbitLabel("cusp")
UNKNOWN = OrbitLabel("unknown")


def period_special(period, ctx):
    try:
        return classify(period_matrix(period, ctx)).special
    except UndeterminedError:
        return None


def orbit_label(e: CFExpansion, ctx) -> OrbitLabel:
    if e.status is Status.FINITE:
        return CUSP
    if e.status is Status.UNDETERMINED:
        return UNKNOWN
    return OrbitLabel(
        "hyperbolic",
        canonical_cycle(e.period),
        period_special(e.period, ctx),
        symmetry_class(e.period),
    )


def _numeric_leading_digits(x, n, lam, prec_bits):
    import mpmath

    out = []
    with mpmath.workprec(prec_bits):
        eps = mpmath.mpf(2) ** (-(prec_bits // 2))
        for _ in range(n):
            a = int(mpmath.ceil(x / lam - mpmath.mpf(1) / 2))
            r = x - a * lam
            if abs(r - lam / 2) < eps or abs(r + lam / 2) < eps or abs(r) < eps:
                raise UndeterminedError("remainder too close to a boundary")
            out.append(a)
            x = -1 / r
    return out


def validate_period(period, ctx, prec_bits: int = 400) -> bool:
    """Whether ``period`` occurs as the period of an actual lambda-CF.

    The repelling fixed point x of the period matrix is overline[period]
    exactly when its first ``len(period)`` digits are ``period``: the tail
    after one period is ``M x = x`` again. Special periods are checked
    exactly; others use high-precision numerics.
    """
    period = tuple(period)
    m = period_matrix(period, ctx)
    spectral = classify(m)
    if spectral.kind is not Kind.HYPERBOLIC:
        raise NotHyperbolicError(f"period {period} gives a {spectral.kind.value} matrix")
    if spectral.special:
        x = fixed_points_exact(m, spectral).repelling
        if x is INF:
            return False
        e = expand(x, max_steps=len(period) + 1)
        return e.status is Status.PREPERIODIC and e.preperiod == 0 and e.period == primitive_period(period)
    import mpmath

    with mpmath.workprec(prec_bits):
        _, rep = fixed_points_numeric(m, prec_bits)
        lam = mpmath.mpf(ctx.root_approx(0, prec_bits)) / mpmath.mpf(2) ** prec_bits
        return tuple(_numeric_leading_digits(rep, len(period), lam, prec_bits)) == period
