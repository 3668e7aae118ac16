"""Words in the Hecke group as a free product Z/2 * Z/q, and digit sequences.

A word in normal form is a tuple of syllables, each either ``"S"`` or an
integer ``a`` in ``1..q-1`` standing for ``U^a`` with ``U = S T``. Normal
forms alternate between the two kinds. Relations hold in PSL(2,R), so a
word determines a matrix only up to sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .group import GroupMatrix, generator, st_product

S = "S"


def digit_seq(digits) -> tuple:
    digits = tuple(int(n) for n in digits)
    if any(n == 0 for n in digits):
        raise ValueError("digit sequences may not contain 0")
    return digits


def _reduce_syllables(tokens, q):
    out = []
    for tok in tokens:
        if tok == S:
            if out and out[-1] == S:
                out.pop()
            else:
                out.append(S)
            continue
        e = tok % q
        if e == 0:
            continue
        if out and out[-1] != S:
            e = (out.pop() + e) % q
            if e == 0:
                continue
        out.append(e)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    q: int
    syllables: tuple = field(default=())

    @classmethod
    def from_tokens(cls, q, tokens):
        return cls(q, _reduce_syllables(tokens, q))

    def __post_init__(self):
        prev = None
        for tok in self.syllables:
            if tok != S and not (isinstance(tok, int) and 1 <= tok < self.q):
                raise ValueError(f"bad syllable {tok!r}")
            if prev is not None and (prev == S) == (tok == S):
                raise ValueError("syllables must alternate; use Word.from_tokens")
            prev = tok

    def __len__(self):
        return len(self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        if other.q != self.q:
            raise ValueError("words over different groups")
        return Word.from_tokens(self.q, self.syllables + other.syllables)

    def inverse(self) -> "Word":
        return Word(self.q, tuple(S if t == S else self.q - t for t in reversed(self.syllables)))

    def is_identity(self):
        return not self.syllables

    def is_cyclically_reduced(self):
        syl = self.syllables
        return len(syl) <= 1 or (syl[0] == S) != (syl[-1] == S)

    def to_matrix(self, ctx) -> GroupMatrix:
        if ctx.q != self.q:
            raise ValueError("context has a different q")
        s, u = generator("S", ctx), generator("U", ctx)
        m = GroupMatrix.identity(ctx)
        for tok in self.syllables:
            m = m @ (s if tok == S else u ** tok)
        return m

    def __str__(self):
        if not self.syllables:
            return "1"
        return " ".join("S" if t == S else ("U" if t == 1 else f"U^{t}") for t in self.syllables)


def reduce(w: Word) -> Word:
    """Normal form; words built by ``Word`` are already reduced."""
    return Word.from_tokens(w.q, w.syllables)


def _st_power_tokens(n, q):
    if n > 0:
        return [1] + [S, 1] * (n - 1)
    return [S] + [q - 1, S] * (-n)


def digits_to_word(digits: Sequence[int], q: int, convention: str = "M") -> Word:
    """Word of a digit sequence.

    ``convention="M"``: M(n_1..n_k) = S T^{n_k} ... S T^{n_1}.
    ``convention="Mx"``: the fixing matrix S T^{-a_n} ... S T^{-a_0} of a
    periodic expansion with period (a_0..a_n).
    """
    digits = digit_seq(digits)
    if convention == "Mx":
        digits = tuple(-n for n in digits)
    elif convention != "M":
        raise ValueError(f"unknown convention {convention!r}")
    tokens = []
    for n in reversed(digits):
        tokens.extend(_st_power_tokens(n, q))
    return Word.from_tokens(q, tokens)


def cyclic_reduce(w: Word):
    """Return ``(r, c)`` with r cyclically reduced and ``c * r * c^-1 == w``."""
    q = w.q
    syl = list(w.syllables)
    conj = []
    while len(syl) >= 2:
        first, last = syl[0], syl[-1]
        if first == S and last == S:
            syl = syl[1:-1]
            conj.append(S)
        elif first != S and last != S:
            # U^a X U^b = U^a (X U^(a+b)) U^-a
            syl = syl[1:]
            e = (last + first) % q
            if e:
                syl[-1] = e
            else:
                syl.pop()
            conj.append(first)
        else:
            break
    return Word(q, tuple(syl)), Word.from_tokens(q, conj)


def _is_rotation(a, b):
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = a + a
    n = len(a)
    return any(doubled[i:i + n] == b for i in range(n))


def conjugate_test(w1: Word, w2: Word) -> bool:
    """Conjugacy in PSL via cyclic reduction and rotation comparison."""
    if w1.q != w2.q:
        raise ValueError("words over different groups")
    r1, _ = cyclic_reduce(w1)
    r2, _ = cyclic_reduce(w2)
    if len(r1) <= 1 or len(r2) <= 1:
        return r1.syllables == r2.syllables
    return _is_rotation(r1.syllables, r2.syllables)


def least_rotation(s: Sequence) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    ss = list(s) + list(s)
    fail = [-1] * len(ss)
    k = 0
    for j in range(1, len(ss)):
        sj = ss[j]
        i = fail[j - k - 1]
        while i != -1 and sj != ss[k + i + 1]:
            if sj < ss[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != ss[k + i + 1]:
            if sj < ss[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


def canonical_cycle(digits: Sequence[int]) -> tuple:
    digits = tuple(digits)
    if not digits:
        return digits
    k = least_rotation(digits)
    return digits[k:] + digits[:k]


def symmetry_images(digits):
    digits = tuple(digits)
    neg = tuple(-n for n in digits)
    return (digits, neg, digits[::-1], neg[::-1])


def symmetry_class(digits: Sequence[int]) -> tuple:
    """Least canonical cycle over negation and reversal of the period."""
    return min(canonical_cycle(s) for s in symmetry_images(digits))


def primitive_period(digits: Sequence[int]) -> tuple:
    """Shortest block whose repetition gives ``digits``."""
    digits = tuple(digits)
    n = len(digits)
    for p in range(1, n + 1):
        if n % p == 0 and digits == digits[:p] * (n // p):
            return digits[:p]
    return digits


def max_unit_run(digits: Sequence[int]) -> int:
    """Longest cyclic run of consecutive 1's or consecutive -1's."""
    digits = tuple(digits)
    best = 0
    for target in (1, -1):
        if digits and all(n == target for n in digits):
            return len(digits)
        run = 0
        # two passes cover runs that wrap around
        for n in digits + digits:
            run = run + 1 if n == target else 0
            best = max(best, min(run, len(digits)))
    return best


def satisfies_conj_hypotheses(digits: Sequence[int], q: int) -> bool:
    """Mixed signs and every cyclic run of +-1's shorter than q/2 - 2."""
    digits = tuple(digits)
    if not digits or all(n > 0 for n in digits) or all(n < 0 for n in digits):
        return False
    return 2 * max_unit_run(digits) < q - 4


def format_period(digits) -> str:
    return "[" + ",".join(str(n) for n in digits) + "] (periodic)"


@dataclass(frozen=True)
class FamilySpec:
    """The family M_k = D^k C B^k A written as digit sequences in M notation."""

    A: tuple
    B: tuple
    C: tuple
    D: tuple
    unit_name: str = "u18"
    name: str = ""

    def matrices(self, ctx):
        return tuple(st_product(part, ctx) for part in (self.A, self.B, self.C, self.D))


def family_digits(f: FamilySpec, k: int) -> tuple:
    if k < 0:
        raise ValueError("k must be non-negative")
    return tuple(f.A) + tuple(f.B) * k + tuple(f.C) + tuple(f.D) * k


def _fam(name, a, b, c, d):
    return FamilySpec(digit_seq(a), digit_seq(b), digit_seq(c), digit_seq(d), "u18", name)


G18_FAMILIES = (
    _fam("F1", (2,), (-4, -1, 4, 1), (-2, -2, 2), (1, -4, -1, 4)),
    _fam("F2", (4,), (2, -2, -2, 2), (1, -4, -1), (2, 2, -2, -2)),
    _fam("F3", (-4,), (-1, 8, 1, -2), (-2, 1, 2), (-2, -1, 8, 1)),
    _fam("F4", (-1,), (-4, 2, 1, -2), (-2, 1, 8), (1, -1, -1, 16)),
    _fam("F5", (16,), (1, -2, -1, 8), (-1, -1, 1), (8, 1, -2, -1)),
    _fam("F6", (4,), (2, -2, -2, 2), (2, -2, -1, 4, 1, -2, -2), (2, 2, -2, -2)),
    _fam("F7", (4,), (1, -2, -4, 2), (1, -2, -2, 4, 2, -2, -1), (2, 4, -2, -1)),
    _fam("F8", (2,), (-4, -1, 4, 1), (-4, -1, 2, 2, -2, -1, 4), (1, -4, -1, 4)),
    _fam("F9", (2,), (-2, -1, 8, 1), (-2, -1, 4, 2, -4, -1, 2), (1, -8, -1, 2)),
    _fam("F10", (-4,), (-1, 8, 1, -2), (-1, 8, -1, -1, 1, 8, 1), (-2, -1, 8, 1)),
    _fam("F11", (2,), (-8, -1, 2, 1), (-8, -1, 1, 2, -1, -1, 8), (1, -2, -1, 8)),
    _fam("F12", (2,), (-1, -1, 16, 1), (-1, -1, 8, 2, -8, -1, 1), (1, -16, -1, 1)),
    _fam("F13", (16,), (1, -2, -1, 8), (1, -2, -2, 1, 2, -2, -1), (8, 1, -2, -1)),
)
