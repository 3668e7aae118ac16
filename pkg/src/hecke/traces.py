"""Trace identities and verification of infinite families D^k C B^k A."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .field import FieldElement, build_field_context, in_lambda_Q_lambda2, log_abs
from .group import INF, GroupMatrix, Kind, classify, fixed_points_exact
from .words import FamilySpec, conjugate_test, digits_to_word, family_digits


class HypothesisError(ValueError):
    """Tr(B) != Tr(D), so the three-term recurrence does not apply."""


class NoMatchError(ValueError):
    pass


def trace_identity_check(a: GroupMatrix, b: GroupMatrix) -> bool:
    """Tr(AB) + Tr(AB^-1) == Tr(A) Tr(B)."""
    return (a @ b).trace() + (a @ b.inverse()).trace() == a.trace() * b.trace()


def family_matrix(f: FamilySpec, k: int, ctx) -> GroupMatrix:
    a, b, c, d = f.matrices(ctx)
    return (d ** k) @ c @ (b ** k) @ a


def family_trace(f: FamilySpec, k: int, ctx) -> FieldElement:
    if k < 0:
        raise ValueError("k must be non-negative")
    return family_matrix(f, k, ctx).trace()


def recurrence_check(f: FamilySpec, k_max: int, ctx) -> bool:
    """Check Tr(M_k) = (Tr(B)^2 - 1)(Tr(M_{k-1}) - Tr(M_{k-2})) + Tr(M_{k-3}) for 3 <= k <= k_max."""
    if k_max < 3:
        raise ValueError("k_max must be at least 3")
    _, b, _, d = f.matrices(ctx)
    tb = b.trace()
    if tb != d.trace():
        raise HypothesisError("Tr(B) != Tr(D)")
    traces = [family_trace(f, k, ctx) for k in range(k_max + 1)]
    coef = tb * tb - 1
    return all(
        traces[k] == coef * (traces[k - 1] - traces[k - 2]) + traces[k - 3]
        for k in range(3, k_max + 1)
    )


def power_trace(u: FieldElement, n: int) -> FieldElement:
    return u ** n + u ** (-n)


def unit_power_decompose(t: FieldElement, u: FieldElement):
    """Find ``(n, s)`` with n >= 0, s = +-1 and ``t == (s u)^n + (s u)^-n``."""
    log_u = log_abs(u)
    if log_u <= 0:
        raise ValueError("u must exceed 1 in absolute value")
    if t == 2:
        return 0, 1
    estimate = round(log_abs(t) / log_u) if not t.is_zero() else 0
    for n in sorted(range(max(estimate - 2, 0), estimate + 3), key=lambda m: abs(m - estimate)):
        for s in (1, -1):
            if power_trace(u * s, n) == t:
                return n, s
    raise NoMatchError(f"no power of the unit near exponent {estimate} matches")


@dataclass
class FamilyVerdict:
    family: FamilySpec
    base_traces: tuple
    unit: Optional[FieldElement]  # eigenvalue of B with |t| > 1
    base_exponent: Optional[int]  # n with Tr(M_k) = Tr(B^(n + 2k))
    named_unit_pattern: Optional[tuple]  # (slope, intercept, sign) in powers of the named unit
    verified_k_max: int
    all_special: bool
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self):
        return not self.failures

    def exponents(self):
        if self.base_exponent is None:
            return None
        n = self.base_exponent
        return (n, n + 2, n + 4)

    def to_json(self):
        pattern = None
        if self.named_unit_pattern is not None:
            slope, intercept, sign = self.named_unit_pattern
            pattern = {"unit": self.family.unit_name, "slope": slope, "intercept": intercept, "sign": sign}
        return {
            "family": self.family.name,
            "verdict": "verified" if self.ok else "failed",
            "base_exponent": self.base_exponent,
            "exponents": self.exponents(),
            "pattern": pattern,
            "verified_k_max": self.verified_k_max,
            "all_special": self.all_special,
            "base_traces": [str(t) for t in self.base_traces],
            "failures": self.failures,
            "seconds": round(self.seconds, 3),
        }


def verify_family(f: FamilySpec, k_max: int, ctx=None) -> FamilyVerdict:
    """Check the trace-power hypotheses and their consequences for k <= k_max."""
    start = time.perf_counter()
    if ctx is None:
        ctx = build_field_context(18)
    failures = []
    _, b, _, d = f.matrices(ctx)
    base = tuple(family_trace(f, k, ctx) for k in range(3))
    verdict = FamilyVerdict(f, base, None, None, None, -1, False, failures)

    def done():
        verdict.seconds = time.perf_counter() - start
        return verdict

    if b.trace() != d.trace():
        failures.append("Tr(B) != Tr(D)")
        return done()
    sb = classify(b)
    if not sb.special:
        failures.append("B is not special hyperbolic")
        return done()
    t = sb.eigenvalue
    verdict.unit = t
    try:
        n, s = unit_power_decompose(base[0], t)
    except NoMatchError:
        failures.append("Tr(M_0) is not a trace of a power of B")
        return done()
    if s != 1 and n % 2:
        failures.append("Tr(M_0) matches only a negated power")
        return done()
    verdict.base_exponent = n
    for k in (1, 2):
        if base[k] != power_trace(t, n + 2 * k):
            failures.append(f"Tr(M_{k}) != Tr(B^{n + 2 * k})")
    if failures:
        return done()
    named = ctx.named.get(f.unit_name)
    if named is not None:
        try:
            m, sign = unit_power_decompose(b.trace(), named)
            verdict.named_unit_pattern = (2 * m, m * n, sign)
        except NoMatchError:
            pass

    words = []
    all_special = True
    for k in range(k_max + 1):
        mk = family_matrix(f, k, ctx)
        if mk.trace() != power_trace(t, n + 2 * k):
            failures.append(f"k={k}: trace is not Tr(B^{n + 2 * k})")
            break
        spectral = classify(mk)
        if spectral.kind is not Kind.HYPERBOLIC or not spectral.special:
            all_special = False
            failures.append(f"k={k}: M_k is not special hyperbolic")
            break
        fps = fixed_points_exact(mk, spectral)
        if not all(p is not INF and in_lambda_Q_lambda2(p) for p in fps[:2]):
            failures.append(f"k={k}: fixed point outside l*Q(l^2)")
            break
        w = digits_to_word(family_digits(f, k), ctx.q, "M")
        for j, other in enumerate(words):
            if conjugate_test(w, other):
                failures.append(f"k={k}: conjugate to k={j}")
        words.append(w)
        verdict.verified_k_max = k
    verdict.all_special = all_special and verdict.verified_k_max == k_max
    return done()

