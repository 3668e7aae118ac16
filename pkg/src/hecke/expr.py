"""Parser for field-element expressions such as ``531/7*l^2 + 402/7*l - 319/7``.

Grammar (precedence low to high)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' exponent)?
    atom   := NUMBER | NAME | '(' expr ')'

``^`` binds tighter than unary minus, so ``-l^2`` is ``-(l^2)``; the
exponent is a signed integer.
"""

from __future__ import annotations

import re
from fractions import Fraction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ExprError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def tokenize(src):
    pos = 0
    out = []
    src = src.replace("−", "-")
    while pos < len(src):
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos == len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m:
            raise ExprError(f"unexpected character {src[pos]!r}", pos)
        start = m.start(m.lastindex)
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num), start))
        elif name is not None:
            out.append(("name", name, start))
        else:
            out.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    out.append(("end", None, len(src)))
    return out


class _Parser:
    def __init__(self, src, ctx, names):
        self.toks = tokenize(src)
        self.i = 0
        self.ctx = ctx
        self.names = names

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ExprError(f"expected {op!r}", pos)

    def parse(self):
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ExprError("unexpected trailing input", pos)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                if val == "*":
                    value = value * rhs
                else:
                    if rhs == 0:
                        raise ExprError("division by zero", pos)
                    value = value / rhs
            else:
                return value

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            value = self.unary()
            return -value if val == "-" else value
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            sign = 1
            k2, v2, p2 = self.peek()
            if k2 == "op" and v2 in "+-":
                self.take()
                sign = -1 if v2 == "-" else 1
            k3, v3, p3 = self.take()
            if k3 == "num":
                exp = v3
            elif k3 == "op" and v3 == "(":
                exp = self._paren_int()
            else:
                raise ExprError("exponent must be an integer", p3)
            exp *= sign
            if exp < 0 and base == 0:
                raise ExprError("division by zero", pos)
            return base ** exp
        return base

    def _paren_int(self):
        sign = 1
        kind, val, pos = self.take()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            kind, val, pos = self.take()
        if kind != "num":
            raise ExprError("exponent must be an integer", pos)
        self.expect_op(")")
        return sign * val

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return self.ctx(Fraction(val))
        if kind == "name":
            if val not in self.names:
                raise ExprError(f"unknown name {val!r}", pos)
            return self.names[val]
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        raise ExprError("expected a number, name or '('", pos)


def parse_element(src, ctx):
    """Evaluate an expression in the field ``ctx``; names come from ``ctx.named``."""
    return _Parser(src, ctx, ctx.named).parse()


def parse_digits(src):
    """Digit list in the compact notation ``[2, 1^3, -2, (-1)^3]``.

    ``n^k`` repeats n k times; negative entries are written ``(-n)^k``.
    """
    src = src.strip()
    if src.startswith("[") and src.endswith("]"):
        src = src[1:-1]
    out = []
    for part in _split_top(src):
        part = part.replace(" ", "").replace("−", "-")
        if not part:
            continue
        m = re.fullmatch(r"\(?(-?\d+)\)?(?:\^(\d+))?", part)
        if not m:
            raise ValueError(f"bad digit entry {part!r}")
        out.extend([int(m.group(1))] * int(m.group(2) or 1))
    return out


def _split_top(src):
    depth, cur, parts = 0, "", []
    for ch in src:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts
