"""Sparse multivariate polynomials over ℚ in the variables ``x1..xn``.

Text format (used for JSON and the CLI)::

    poly    := ["+"|"-"] term (("+"|"-") term)*
    term    := factor ("*" factor)*
    factor  := atom ["^" INT]
    atom    := INT | INT "/" INT | "x" INT

There are no parentheses.  ``x1^2*x4 - 3/2*x2`` is a valid polynomial;
variables are numbered from 1 and must not exceed ``n``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import HigherDiracError


class PolyParseError(HigherDiracError):
    pass


class Poly:
    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        self.n = n
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for {n} variables")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self._terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def _raw(cls, n, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj._terms = terms
        return obj

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        c = Fraction(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, n: int, i: int) -> "Poly":
        if not 1 <= i <= n:
            raise ValueError(f"variable x{i} out of range 1..{n}")
        e = [0] * n
        e[i - 1] = 1
        return cls._raw(n, {tuple(e): Fraction(1)})

    @classmethod
    def parse(cls, text: str, n: int) -> "Poly":
        return _parse(text, n)

    def lift(self, x) -> "Poly":
        if isinstance(x, Poly):
            if x.n != self.n:
                raise ValueError(f"polynomials in {self.n} and {x.n} variables")
            return x
        return Poly.const(self.n, x)

    @property
    def terms(self):
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant(self) -> Fraction:
        return self._terms.get((0,) * self.n, Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def __bool__(self):
        return bool(self._terms)

    def __add__(self, other):
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        other = self.lift(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        return self + (-self.lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw(self.n, {})
            return Poly._raw(self.n, {e: c * other for e, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        other = self.lift(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly._raw(self.n, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = Poly.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant() == other
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant())
        return hash((self.n, frozenset(self._terms.items())))

    def diff(self, i: int) -> "Poly":
        """``∂/∂x_i`` (1-based)."""
        j = i - 1
        out = {}
        for e, c in self._terms.items():
            if e[j]:
                f = list(e)
                f[j] -= 1
                out[tuple(f)] = c * e[j]
        return Poly._raw(self.n, out)

    def __call__(self, point: Sequence) -> Fraction:
        if len(point) != self.n:
            raise ValueError(f"expected {self.n} coordinates")
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total += v
        return total

    def substitute(self, values: Mapping[int, object]) -> "Poly":
        """Replace selected variables (1-based) by constants."""
        out: dict = {}
        for e, c in self._terms.items():
            f = list(e)
            v = c
            for i, x in values.items():
                k = f[i - 1]
                if k:
                    v = v * Fraction(x) ** k
                    f[i - 1] = 0
            if v:
                key = tuple(f)
                out[key] = out.get(key, 0) + v
        return Poly._raw(self.n, {e: c for e, c in out.items() if c})

    def _order(self):
        # graded lexicographic, highest first
        return sorted(self._terms, key=lambda e: (sum(e), e), reverse=True)

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for e in self._order():
            c = self._terms[e]
            mono = "*".join(
                f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            pieces.append(("-" if c < 0 else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self})"


_TOKEN = re.compile(r"\s*(?:(\d+)|(x)(\d+)|([-+*^/]))")


def _tokens(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} in {text!r}")
        if m.group(1) is not None:
            out.append(("int", int(m.group(1))))
        elif m.group(2):
            out.append(("var", int(m.group(3))))
        else:
            out.append(("op", m.group(4)))
        pos = m.end()
    return out


def _parse(text: str, n: int) -> Poly:
    if not isinstance(text, str):
        if isinstance(text, (int, Fraction)):
            return Poly.const(n, text)
        raise PolyParseError(f"expected a polynomial string, got {text!r}")
    toks = _tokens(text)
    if not toks:
        raise PolyParseError("empty polynomial")
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take():
        nonlocal i
        t = peek()
        if t is None:
            raise PolyParseError(f"unexpected end of {text!r}")
        i += 1
        return t

    def atom():
        kind, val = take()
        if kind == "int":
            if peek() == ("op", "/"):
                take()
                k2, den = take()
                if k2 != "int" or den == 0:
                    raise PolyParseError(f"bad rational literal in {text!r}")
                return Poly.const(n, Fraction(val, den))
            return Poly.const(n, val)
        if kind == "var":
            if not 1 <= val <= n:
                raise PolyParseError(f"x{val} is out of range 1..{n}")
            return Poly.var(n, val)
        raise PolyParseError(f"unexpected {val!r} in {text!r}")

    def factor():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, e = take()
            if kind != "int":
                raise PolyParseError(f"exponent must be an integer in {text!r}")
            base = base ** e
        return base

    def term():
        v = factor()
        while peek() == ("op", "*"):
            take()
            v = v * factor()
        return v

    sign = 1
    if peek() in (("op", "+"), ("op", "-")):
        sign = -1 if take()[1] == "-" else 1
    total = term() * sign
    while peek() is not None:
        kind, op = take()
        if kind != "op" or op not in "+-":
            raise PolyParseError(f"expected + or - in {text!r}")
        t = term()
        total = total + t if op == "+" else total - t
    return total
