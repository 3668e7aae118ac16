"""Exact arithmetic in the real cyclotomic field Q(lambda_q), lambda_q = 2cos(pi/q).

Elements are stored as an integer numerator vector over the power basis
1, l, ..., l^(d-1) and one positive common denominator. Signs under the
real embeddings are decided by refining rational approximations of the
roots of the minimal polynomial until the evaluation interval excludes 0.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import poly

__all__ = [
    "FieldContext",
    "FieldElement",
    "UndeterminedError",
    "build_field_context",
    "sign_at",
    "compare",
    "sqrt_in_field",
    "in_lambda_Q_lambda2",
    "embed_all",
    "approx",
]

# magnitude bound for every root and every approximation of one
_ROOT_BOUND = 3
_START_BITS = 64
MAX_WITNESS_PRIMES = int(os.environ.get("HECKE_WITNESS_PRIMES", "64"))


class UndeterminedError(ArithmeticError):
    """A bounded search gave up without reaching a certified answer."""


def euler_phi(n):
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


class FieldContext:
    """Precomputed data for K = Q(lambda_q).

    Treat instances as immutable; ``build_field_context`` caches one per q.
    The only mutable state is a memo of root approximations, which is a pure
    function of the context.
    """

    def __init__(self, q):
        if q < 3:
            raise ValueError("q must be at least 3")
        self.q = q
        self.degree = euler_phi(2 * q) // 2
        psi = poly.palindromic_to_trace_poly(poly.cyclotomic(2 * q))
        assert len(psi) == self.degree + 1 and psi[-1] == 1
        self.min_poly = tuple(psi)
        d = self.degree
        # l^e mod psi for e < 2d - 1, redundant rows for e < d keep indexing simple
        table = []
        cur = [0] * d
        cur[0] = 1
        for _ in range(2 * d - 1):
            table.append(tuple(cur))
            cur = self._times_lambda(cur)
        self._pow_table = table
        intervals = poly.isolate_real_roots(list(psi), Fraction(-2), Fraction(2))
        if len(intervals) != d:
            raise AssertionError("minimal polynomial is not totally real")
        # descending order: index 0 is the largest root, which is 2cos(pi/q)
        self.root_intervals = tuple(reversed(intervals))
        self.distinguished = 0
        self._approx_memo = {}
        self._exact_root = None
        if d == 1:
            self._exact_root = Fraction(-psi[0])
        self.named = {}

    def __repr__(self):
        return f"FieldContext(q={self.q}, degree={self.degree})"

    def __reduce__(self):
        return (build_field_context, (self.q,))

    def _times_lambda(self, vec):
        d = self.degree
        top = vec[-1]
        out = [0] + list(vec[:-1])
        if top:
            for i in range(d):
                out[i] -= top * self.min_poly[i]
        return out

    # -- constructors -----------------------------------------------------

    def element(self, coeffs):
        """Element from a rational coefficient list (lowest power first)."""
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            return self.from_poly(coeffs)
        coeffs = coeffs + [Fraction(0)] * (self.degree - len(coeffs))
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        return FieldElement._make(self, [int(c * den) for c in coeffs], den)

    def from_poly(self, coeffs):
        """Element given by a rational polynomial of any degree evaluated at l."""
        coeffs = [Fraction(c) for c in coeffs]
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        return FieldElement._make(self, self._reduce_int_poly(ints), den)

    def _reduce_int_poly(self, ints):
        d = self.degree
        if len(ints) <= d:
            return list(ints) + [0] * (d - len(ints))
        out = list(ints[:d])
        for e in range(d, len(ints)):
            c = ints[e]
            if not c:
                continue
            if e < len(self._pow_table):
                row = self._pow_table[e]
            else:
                row = self._lambda_power_vec(e)
            for i in range(d):
                out[i] += c * row[i]
        return out

    def _lambda_power_vec(self, e):
        vec = list(self._pow_table[-1])
        for _ in range(e - len(self._pow_table) + 1):
            vec = self._times_lambda(vec)
        return vec

    def __call__(self, value):
        if isinstance(value, FieldElement):
            if value.ctx is not self:
                raise ValueError("element belongs to a different field")
            return value
        return self.element([value])

    @property
    def zero(self):
        return self.element([0])

    @property
    def one(self):
        return self.element([1])

    @property
    def lam(self):
        if self.degree == 1:
            return self.element([self._exact_root])
        return self.element([0, 1])

    # -- root approximations -----------------------------------------------

    def root_approx(self, index, bits):
        """Integer m with the root in ``(m/2^bits, (m+1)/2^bits)``."""
        if self._exact_root is not None:
            return math.floor(self._exact_root * (1 << bits))
        memo = self._approx_memo.setdefault(index, {})
        if bits in memo:
            return memo[bits]
        psi = self.min_poly
        d = self.degree
        known = [b for b in memo if b < bits]
        if known:
            b0 = max(known)
            lo = memo[b0] << (bits - b0)
            hi = (memo[b0] + 1) << (bits - b0)
        else:
            a, b = self.root_intervals[index]
            lo = math.floor(a * (1 << bits))
            hi = math.ceil(b * (1 << bits))
        s_lo = _scaled_poly_sign(psi, lo, bits, d)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            s = _scaled_poly_sign(psi, mid, bits, d)
            if s == 0:
                raise AssertionError("rational root of an irreducible polynomial")
            if s == s_lo:
                lo = mid
            else:
                hi = mid
        memo[bits] = lo
        return lo

    def root_float(self, index):
        m = self.root_approx(index, 64)
        return m / (1 << 64)


def _scaled_poly_sign(coeffs, m, bits, deg):
    acc = 0
    for i in range(deg, -1, -1):
        acc = acc * m + (coeffs[i] << (bits * (deg - i)))
    return (acc > 0) - (acc < 0)


@lru_cache(maxsize=None)
def build_field_context(q):
    """Construct (and cache) the field data for Q(2cos(pi/q))."""
    ctx = FieldContext(q)
    lam = ctx.lam
    l2 = lam * lam
    named = {"l": lam, "l1": l2 - 1, "l2": l2 - 2}
    if q % 2 == 1:
        named["lp"] = 2 - l2
    if q == 7:
        named["u7"] = l2 + lam
    if q == 18:
        named["u18"] = 2 * l2 * l2 - 4 * l2 + 1
    ctx.named = named
    return ctx


class FieldElement:
    """Exact element of Q(lambda): ``sum(num[i] * l**i) / den``."""

    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx, coeffs):
        other = ctx.element(coeffs)
        self.ctx, self.num, self.den, self._hash = ctx, other.num, other.den, None

    @classmethod
    def _make(cls, ctx, num, den):
        if den < 0:
            num = [-a for a in num]
            den = -den
        g = den
        for a in num:
            if a:
                g = gcd(g, a)
                if g == 1:
                    break
        if g != 1:
            num = [a // g for a in num]
            den //= g
        if not any(num):
            den = 1
        self = object.__new__(cls)
        self.ctx = ctx
        self.num = tuple(num)
        self.den = den
        self._hash = None
        return self

    # -- views -------------------------------------------------------------

    @property
    def coeffs(self):
        return [Fraction(a, self.den) for a in self.num]

    def is_zero(self):
        return not any(self.num)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self):
        return not any(self.num[1:])

    def key(self):
        return (self.ctx.q, self.num, self.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx is other.ctx and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == self.ctx(other)
        return NotImplemented

    def __repr__(self):
        return f"FieldElement(q={self.ctx.q}, {self})"

    def __str__(self):
        terms = []
        for i in range(len(self.num) - 1, -1, -1):
            c = Fraction(self.num[i], self.den)
            if not c:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                mono = "l" if i == 1 else f"l^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, body in terms[1:]:
            out += f" {s} {body}"
        return out

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise ValueError("elements belong to different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return FieldElement._make(self.ctx, [a + b for a, b in zip(self.num, other.num)], self.den)
        return FieldElement._make(
            self.ctx,
            [a * other.den + b * self.den for a, b in zip(self.num, other.num)],
            self.den * other.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._make(self.ctx, [-a for a in self.num], self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return FieldElement._make(
                self.ctx, [a * other.numerator for a in self.num], self.den * other.denominator
            )
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prod = poly.mul(self.num, other.num)
        return FieldElement._make(self.ctx, self.ctx._reduce_int_poly(prod), self.den * other.den)

    __rmul__ = __mul__

    def times_lambda(self):
        return FieldElement._make(self.ctx, self.ctx._times_lambda(self.num), self.den)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in the number field")
        ctx = self.ctx
        d = ctx.degree
        cols = [list(self.num)]
        for _ in range(d - 1):
            cols.append(ctx._times_lambda(cols[-1]))
        mat = [[cols[j][i] for j in range(d)] for i in range(d)]
        rhs = [1] + [0] * (d - 1)
        sol, det = _fraction_free_solve(mat, rhs)
        # (num/den) * y = 1 with y = sol/det  =>  inverse = den * sol / det
        return FieldElement._make(ctx, [self.den * s for s in sol], det)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_rational():
            c = Fraction(other.num[0], other.den)
            if not c:
                raise ZeroDivisionError("division by zero in the number field")
            return FieldElement._make(self.ctx, [a * c.denominator for a in self.num], self.den * c.numerator)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ctx.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # ordering under the distinguished embedding
    def __lt__(self, other):
        return compare(self, self._coerce(other)) < 0

    def __le__(self, other):
        return compare(self, self._coerce(other)) <= 0

    def __gt__(self, other):
        return compare(self, self._coerce(other)) > 0

    def __ge__(self, other):
        return compare(self, self._coerce(other)) >= 0

    def __abs__(self):
        return -self if sign_at(self) < 0 else self

    def __float__(self):
        return approx(self)

    # -- serialization -------------------------------------------------------

    def to_json(self):
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    @classmethod
    def from_json(cls, ctx, data):
        if len(data) != ctx.degree:
            raise ValueError(f"expected {ctx.degree} coefficients, got {len(data)}")
        return ctx.element([Fraction(s) for s in data])


def _fraction_free_solve(mat, rhs):
    """Solve ``mat @ x = rhs`` over Z by fraction-free Gauss-Jordan.

    Returns ``(sol, det)`` with ``x = sol / det`` (det may carry a sign).
    """
    n = len(mat)
    a = [list(row) + [b] for row, b in zip(mat, rhs)]
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k]:
                    a[k], a[p] = a[p], a[k]
                    break
            else:
                raise ZeroDivisionError("singular multiplication matrix")
        rk = a[k]
        piv = rk[k]
        for i in range(n):
            if i == k:
                continue
            ri = a[i]
            aik = ri[k]
            a[i] = [(piv * x - aik * y) // prev for x, y in zip(ri, rk)]
        prev = piv
    return [row[n] for row in a], prev


# -- evaluation under embeddings ----------------------------------------------


def _eval_scaled(num, m, bits):
    """``sum(num[i] * (m/2^bits)^i) * 2^(bits*(len-1))`` as an exact integer."""
    top = len(num) - 1
    acc = 0
    for i in range(top, -1, -1):
        acc = acc * m + (num[i] << (bits * (top - i)))
    return acc


def _deriv_bound(num):
    bound = 0
    p = 1
    for i in range(1, len(num)):
        bound += i * abs(num[i]) * p
        p *= _ROOT_BOUND
    return bound


def _enclosure(x, index, bits):
    """Return ``(value, err, scale)``: the true ``x*den*scale`` lies within err of value."""
    ctx = x.ctx
    d = ctx.degree
    if ctx._exact_root is not None:
        return x.num[0], 0, 1
    m = ctx.root_approx(index, bits)
    value = _eval_scaled(x.num, m, bits)
    err = _deriv_bound(x.num) << (bits * (d - 2)) if d >= 2 else 0
    return value, err, 1 << (bits * (d - 1))


def sign_at(x, root_index=0):
    """Exact sign of x under the embedding sending l to the given root."""
    if x.is_zero():
        return 0
    bits = _START_BITS
    while True:
        value, err, _ = _enclosure(x, root_index, bits)
        if abs(value) > err:
            return 1 if value > 0 else -1
        bits *= 2


def compare(x, y):
    """-1, 0 or 1 as x <, =, > y under the distinguished embedding."""
    return sign_at(x - y)


def interval_at(x, root_index, bits):
    """Rational interval ``(lo, hi)`` containing the embedded value of x."""
    value, err, scale = _enclosure(x, root_index, bits)
    denom = scale * x.den
    return Fraction(value - err, denom), Fraction(value + err, denom)


def embed_all(x, precision=53):
    """One certified interval per real embedding, each of width at most 2^-precision."""
    out = []
    target = Fraction(1, 1 << precision)
    for j in range(x.ctx.degree):
        bits = max(_START_BITS, precision + 8)
        while True:
            lo, hi = interval_at(x, j, bits)
            if hi - lo <= target:
                break
            bits *= 2
        out.append((lo, hi))
    return out


def approx(x, root_index=0):
    """Float value of x under the given embedding."""
    value, err, scale = _enclosure(x, root_index, _START_BITS)
    bits = _START_BITS
    while err and abs(value) <= 1024 * err:
        bits *= 2
        value, err, scale = _enclosure(x, root_index, bits)
    try:
        return value / (scale * x.den)
    except OverflowError:
        return math.copysign(math.inf, value)


def to_mpf(x, bits, root_index=0):
    """mpmath value of x under an embedding, accurate to about ``bits`` bits."""
    import mpmath

    lo, hi = interval_at(x, root_index, bits + 16)
    mid = (lo + hi) / 2
    return mpmath.mpf(mid.numerator) / mpmath.mpf(mid.denominator)


def log_abs(x, root_index=0):
    """Natural log of |sigma(x)|, safe for values beyond float range."""
    if x.is_zero():
        raise ValueError("log of zero")
    value, err, scale = _enclosure(x, root_index, _START_BITS)
    bits = _START_BITS
    while err and abs(value) <= (1 << 40) * err:
        bits *= 2
        value, err, scale = _enclosure(x, root_index, bits)
    return math.log(abs(value)) - math.log(scale) - math.log(x.den)


# -- subfield membership -------------------------------------------------------


def in_lambda_Q_lambda2(x):
    """Whether x lies in l*Q(l^2); the whole field when q is odd."""
    if x.ctx.q % 2 == 1:
        return True
    return all(a == 0 for a in x.num[0::2])


# -- square roots ----------------------------------------------------------------


def _odd_primes():
    yield 3
    p = 5
    while True:
        if all(p % f for f in range(3, math.isqrt(p) + 1, 2)):
            yield p
        p += 2


@lru_cache(maxsize=None)
def _split_primes(q, count):
    """First ``count`` primes p = +-1 mod 2q, with the roots of psi mod p."""
    ctx = build_field_context(q)
    psi = ctx.min_poly
    out = []
    for p in _odd_primes():
        if len(out) >= count:
            break
        if p % (2 * q) not in (1, 2 * q - 1):
            continue
        roots = [r for r in range(p) if _eval_mod(psi, r, p) == 0]
        if roots:
            out.append((p, tuple(roots)))
    return tuple(out)


def _eval_mod(coeffs, r, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * r + c) % p
    return acc


def _nonresidue_witness(x, max_primes):
    """A (p, root) at which x reduces to a quadratic non-residue, or None."""
    for p, roots in _split_primes(x.ctx.q, max_primes):
        if x.den % p == 0:
            continue
        inv_den = pow(x.den, -1, p)
        for r in roots:
            v = _eval_mod(x.num, r, p) * inv_den % p
            if v and pow(v, (p - 1) // 2, p) == p - 1:
                return p, r
    return None


def _integral_sqrt_attempt(e, extra_bits):
    """Square root of the integral element ``e`` with integer coefficients, or None."""
    import mpmath

    ctx = e.ctx
    d = ctx.degree
    logs = [log_abs(e, j) for j in range(d)]
    # crude bound on the size of the coefficient vector
    bits = int(max(logs) / (2 * math.log(2))) + 16 * d + extra_bits
    with mpmath.workprec(bits):
        roots = [mpmath.mpf(ctx.root_approx(j, bits + 8)) / mpmath.mpf(2) ** (bits + 8) for j in range(d)]
        vinv = mpmath.inverse(mpmath.matrix([[r ** i for i in range(d)] for r in roots]))
        vals = []
        for j in range(d):
            value, _, scale = _enclosure(e, j, bits + 8)
            vals.append(mpmath.sqrt(abs(mpmath.mpf(value) / mpmath.mpf(scale))))
        for mask in range(1 << (d - 1)):
            s = [1] + [(-1 if (mask >> (j - 1)) & 1 else 1) for j in range(1, d)]
            coeffs = []
            ok = True
            for i in range(d):
                c = mpmath.fsum(vinv[i, j] * s[j] * vals[j] for j in range(d))
                n = int(mpmath.nint(c))
                if abs(c - n) > 0.25:
                    ok = False
                    break
                coeffs.append(n)
            if not ok:
                continue
            cand = FieldElement._make(ctx, coeffs, 1)
            if cand * cand == e:
                return cand
    return None


def sqrt_in_field(x, max_primes=None):
    """Non-negative square root of x in K.

    Returns the root, or None when x is certified not to be a square (it
    is negative somewhere, or reduces to a non-residue modulo a prime where
    psi has a root). Raises UndeterminedError when neither route concludes.
    """
    if max_primes is None:
        max_primes = MAX_WITNESS_PRIMES
    if x.is_zero():
        return x
    ctx = x.ctx
    if any(sign_at(x, j) < 0 for j in range(ctx.degree)):
        return None
    if ctx.degree == 1:
        c = Fraction(x.num[0], x.den)
        a, b = math.isqrt(c.numerator), math.isqrt(c.denominator)
        if a * a == c.numerator and b * b == c.denominator:
            return ctx(Fraction(a, b))
        return None
    if _nonresidue_witness(x, max_primes) is not None:
        return None
    # sqrt(num/den) = sqrt(num*den)/den and num*den is integral in Z[l] = O_K
    e = FieldElement._make(ctx, [a * x.den for a in x.num], 1)
    for extra in (64, 256, 1024):
        root = _integral_sqrt_attempt(e, extra)
        if root is not None:
            root = root / x.den
            if sign_at(root) < 0:
                root = -root
            return root
    raise UndeterminedError("square root search exhausted")
