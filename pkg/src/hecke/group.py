"""2x2 matrices over Q(lambda_q), the Hecke group generators and their action on P^1."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

from .field import FieldContext, FieldElement, sign_at, sqrt_in_field


class _Infinity:
    """The point at infinity of the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "oo"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
ProjPoint = Union[FieldElement, _Infinity]


class NotSpecialError(ValueError):
    """Raised when an exact fixed point is requested for a non-special element."""


class NotHyperbolicError(ValueError):
    pass


@dataclass(frozen=True)
class GroupMatrix:
    a: FieldElement
    b: FieldElement
    c: FieldElement
    d: FieldElement

    @property
    def ctx(self) -> FieldContext:
        return self.a.ctx

    @classmethod
    def identity(cls, ctx):
        return cls(ctx.one, ctx.zero, ctx.zero, ctx.one)

    def __matmul__(self, other: "GroupMatrix") -> "GroupMatrix":
        return GroupMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self):
        return GroupMatrix(-self.a, -self.b, -self.c, -self.d)

    def inverse(self):
        # det = 1
        return GroupMatrix(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "GroupMatrix":
        if n < 0:
            return self.inverse() ** (-n)
        result = GroupMatrix.identity(self.ctx)
        base = self
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def trace(self) -> FieldElement:
        return self.a + self.d

    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    def is_scalar_identity(self):
        """True for +I or -I."""
        return self.b.is_zero() and self.c.is_zero() and self.a == self.d and (self.a * self.a) == 1

    def projectively_equal(self, other):
        return self == other or self == -other

    def to_json(self):
        return {
            "q": self.ctx.q,
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "c": self.c.to_json(),
            "d": self.d.to_json(),
        }

    @classmethod
    def from_json(cls, ctx, data):
        if data["q"] != ctx.q:
            raise ValueError("matrix belongs to a different q")
        return cls(*(FieldElement.from_json(ctx, data[k]) for k in "abcd"))


def generator(which: str, ctx: FieldContext) -> GroupMatrix:
    if which == "S":
        return GroupMatrix(ctx.zero, ctx(-1), ctx.one, ctx.zero)
    if which == "T":
        return t_power(ctx, 1)
    if which == "U":
        return GroupMatrix(ctx.zero, ctx(-1), ctx.one, ctx.lam)
    raise ValueError(f"unknown generator {which!r}")


def t_power(ctx, n):
    return GroupMatrix(ctx.one, ctx.lam * n, ctx.zero, ctx.one)


def word_to_matrix(word, ctx):
    """Product of ``(generator, exponent)`` pairs, read left to right."""
    m = GroupMatrix.identity(ctx)
    s = generator("S", ctx)
    for gen, exp in word:
        if gen == "T":
            m = m @ t_power(ctx, exp)
        elif gen == "S":
            m = m @ (s ** (exp % 4))
        elif gen == "U":
            m = m @ (generator("U", ctx) ** exp)
        else:
            raise ValueError(f"unknown generator {gen!r}")
    return m


def st_product(digits, ctx, m=None):
    """M(n_1, ..., n_k) = S T^{n_k} ... S T^{n_1}, optionally times ``m`` on the right."""
    if m is None:
        m = GroupMatrix.identity(ctx)
    a, b, c, d = m.a, m.b, m.c, m.d
    for n in digits:
        # S T^n [[a, b], [c, d]] = [[-c, -d], [a + n l c, b + n l d]]
        a, b, c, d = -c, -d, a + (c * n).times_lambda(), b + (d * n).times_lambda()
    return GroupMatrix(a, b, c, d)


def mobius_apply(m: GroupMatrix, p: ProjPoint) -> ProjPoint:
    if p is INF:
        if m.c.is_zero():
            return INF
        return m.a / m.c
    den = m.c * p + m.d
    if den.is_zero():
        return INF
    return (m.a * p + m.b) / den


class Kind(enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class SpectralData:
    trace: FieldElement
    kind: Kind
    special: bool = False
    eigenvalue: Optional[FieldElement] = None


def in_trace_field(x: FieldElement) -> bool:
    """Membership in K_q: Q(l) for odd q, Q(l^2) for even q."""
    if x.ctx.q % 2 == 1:
        return True
    return all(a == 0 for a in x.num[1::2])


def classify(m: GroupMatrix) -> SpectralData:
    """Trace type of ``m`` and, when hyperbolic, whether it is special.

    Special means the eigenvalues lie in K_q. The eigenvalue returned has
    absolute value greater than 1. May raise UndeterminedError from the
    square-root search.
    """
    tr = m.trace()
    if m.is_scalar_identity():
        return SpectralData(tr, Kind.IDENTITY)
    above = sign_at(tr - 2)
    below = sign_at(tr + 2)
    if above == 0 or below == 0:
        return SpectralData(tr, Kind.PARABOLIC)
    if above < 0 < below:
        return SpectralData(tr, Kind.ELLIPTIC)
    root = sqrt_in_field(tr * tr - 4)
    if root is None or not in_trace_field(root):
        return SpectralData(tr, Kind.HYPERBOLIC, special=False)
    t = (tr + root) / 2 if above > 0 else (tr - root) / 2
    return SpectralData(tr, Kind.HYPERBOLIC, special=True, eigenvalue=t)


class FixedPoints(NamedTuple):
    attracting: ProjPoint
    repelling: ProjPoint
    parabolic: bool = False


def fixed_points_exact(m: GroupMatrix, spectral: Optional[SpectralData] = None) -> FixedPoints:
    """Exact fixed points of a special hyperbolic or parabolic matrix."""
    if spectral is None:
        spectral = classify(m)
    if spectral.kind is Kind.PARABOLIC:
        if m.c.is_zero():
            return FixedPoints(INF, INF, True)
        x = (m.a - m.d) / (2 * m.c)
        return FixedPoints(x, x, True)
    if spectral.kind is not Kind.HYPERBOLIC or not spectral.special:
        raise NotSpecialError("exact fixed points need a special hyperbolic element")
    t = spectral.eigenvalue
    if m.c.is_zero():
        finite = m.b / (m.d - m.a)
        # eigenvector (1, 0) has eigenvalue a
        if sign_at(m.a * m.a - 1) > 0:
            return FixedPoints(INF, finite)
        return FixedPoints(finite, INF)
    # (x, 1) is an eigenvector for eigenvalue s iff c x + d = s
    return FixedPoints((t - m.d) / m.c, (t.inverse() - m.d) / m.c)


def fixed_points_numeric(m: GroupMatrix, prec_bits=200):
    """Attracting and repelling fixed points as mpmath numbers (c must be nonzero)."""
    import mpmath

    from .field import to_mpf

    with mpmath.workprec(prec_bits):
        a, b, c, d = (to_mpf(e, prec_bits) for e in (m.a, m.b, m.c, m.d))
        tr = a + d
        disc = mpmath.sqrt(tr * tr - 4)
        t_big = (tr + disc) / 2 if tr > 0 else (tr - disc) / 2
        return (t_big - d) / c, (1 / t_big - d) / c


class Form(enum.Enum):
    FORM1 = 1
    FORM2 = 2


def _even_support(x):
    return x.den == 1 and all(a == 0 for a in x.num[1::2])


def _odd_support(x):
    return x.den == 1 and all(a == 0 for a in x.num[0::2])


def even_q_form_check(m: GroupMatrix) -> Form:
    """Which parity form an integral matrix over Z[l] takes for even q."""
    if m.ctx.q % 2:
        raise ValueError("parity forms only apply to even q")
    form1 = _even_support(m.a) and _even_support(m.d) and _odd_support(m.b) and _odd_support(m.c)
    form2 = _odd_support(m.a) and _odd_support(m.d) and _even_support(m.b) and _even_support(m.c)
    assert form1 != form2, "matrix satisfies neither or both parity forms"
    return Form.FORM1 if form1 else Form.FORM2
