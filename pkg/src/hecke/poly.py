"""Dense univariate polynomial helpers over the integers and rationals.

Polynomials are coefficient lists, lowest degree first.
"""

from fractions import Fraction
from math import gcd


def strip(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p):
    return len(strip(p)) - 1


def mul(p, r):
    if not p or not r:
        return []
    out = [0] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(r):
                out[i + j] += a * b
    return out


def add(p, r):
    n = max(len(p), len(r))
    return strip([(p[i] if i < len(p) else 0) + (r[i] if i < len(r) else 0) for i in range(n)])


def scale(p, c):
    return strip([c * a for a in p])


def divmod_poly(p, r):
    """Quotient and remainder of ``p`` by ``r`` over the rationals."""
    p = [Fraction(a) for a in strip(p)]
    r = [Fraction(a) for a in strip(r)]
    if not r:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(p) - len(r) + 1, 0)
    lead = r[-1]
    while len(p) >= len(r) and p:
        shift = len(p) - len(r)
        c = p[-1] / lead
        quot[shift] = c
        for i, b in enumerate(r):
            p[i + shift] -= c * b
        p = strip(p)
    return strip(quot), p


def exact_div(p, r):
    """Integer quotient ``p / r`` when ``r`` divides ``p`` exactly."""
    quot, rem = divmod_poly(p, r)
    if rem:
        raise ArithmeticError("division is not exact")
    out = []
    for c in quot:
        if c.denominator != 1:
            raise ArithmeticError("quotient is not integral")
        out.append(int(c))
    return out


def derivative(p):
    return strip([i * a for i, a in enumerate(p)][1:])


def eval_fraction(p, x):
    acc = Fraction(0)
    for a in reversed(p):
        acc = acc * x + a
    return acc


def mobius(n):
    result, m, f = 1, n, 2
    while f * f <= m:
        if m % f == 0:
            m //= f
            if m % f == 0:
                return 0
            result = -result
        f += 1
    if m > 1:
        result = -result
    return result


def divisors(n):
    return [k for k in range(1, n + 1) if n % k == 0]


def cyclotomic(n):
    """Integer coefficients of the n-th cyclotomic polynomial."""
    num, den = [1], [1]
    for k in divisors(n):
        mu = mobius(n // k)
        factor = [-1] + [0] * (k - 1) + [1]
        if mu == 1:
            num = mul(num, factor)
        elif mu == -1:
            den = mul(den, factor)
    return exact_div(num, den)


def palindromic_to_trace_poly(p):
    """Return psi with ``p(x) = x^m psi(x + 1/x)`` for a palindromic ``p`` of degree 2m."""
    p = strip(p)
    if (len(p) - 1) % 2 or p != p[::-1]:
        raise ValueError("expected a palindromic polynomial of even degree")
    m = (len(p) - 1) // 2
    # D_k(y) = x^k + x^-k with y = x + 1/x
    dk = [[2], [0, 1]]
    for _ in range(2, m + 1):
        dk.append(add(mul([0, 1], dk[-1]), scale(dk[-2], -1)))
    psi = [p[m]]
    for k in range(1, m + 1):
        psi = add(psi, scale(dk[k], p[m + k]))
    return psi


def sturm_sequence(p):
    seq = [[Fraction(a) for a in strip(p)]]
    seq.append([Fraction(a) for a in derivative(p)])
    while seq[-1]:
        _, rem = divmod_poly(seq[-2], seq[-1])
        if not rem:
            break
        seq.append([-a for a in rem])
    return seq


def sign_changes(seq, x):
    signs = []
    for f in seq:
        v = eval_fraction(f, x)
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def isolate_real_roots(p, lo, hi):
    """Disjoint intervals ``(a, b]`` each holding exactly one root of squarefree ``p``.

    ``lo`` and ``hi`` are rationals with every real root in ``(lo, hi]``.
    Intervals come back in increasing order; dyadic bisection keeps the
    endpoints dyadic when ``lo`` and ``hi`` are.
    """
    seq = sturm_sequence(p)
    out = []
    stack = [(Fraction(lo), Fraction(hi))]
    while stack:
        a, b = stack.pop()
        count = sign_changes(seq, a) - sign_changes(seq, b)
        if count == 0:
            continue
        if count == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        stack.append((mid, b))
        stack.append((a, mid))
    out.sort()
    return out


def content(values):
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
