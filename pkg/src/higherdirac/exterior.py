"""Sparse exterior algebra over a fixed basis.

Elements of ``∧^p V*`` (:class:`Form`) and ``∧^p V`` (:class:`Multivector`) are
stored as maps from strictly increasing 1-based index tuples to coefficients.
Coefficients are exact rationals by default; any commutative ring element that
supports ``+``, ``*``, negation and comparison with ``0`` may be used instead
(the polynomial layer relies on this).

Sign conventions
----------------
* ``e^{i1} ∧ ... ∧ e^{ip}`` with increasing indices is the basis element
  ``e^{(i1,...,ip)}``; it evaluates to ``1`` on ``(e_{i1}, ..., e_{ip})``.
* ``contract(e_j, e^I)`` removes ``j`` from ``I`` with sign ``(-1)^(s-1)``,
  ``s`` the (1-based) position of ``j`` in ``I``.
* ``contract_multi(X1∧...∧Xq, a) = i_{X1}(i_{X2}(...i_{Xq}(a)))``: the last
  factor is contracted first.  The mirror contraction of a multivector by a
  form follows the same rule with roles swapped.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import AmbientMismatch, DegreeMismatch

__all__ = [
    "Form",
    "Multivector",
    "as_scalar",
    "basis",
    "basis_form",
    "basis_vector",
    "contract",
    "contract_multi",
    "evaluate",
    "sort_sign",
    "vector",
    "wedge",
]


def as_scalar(value):
    """Coerce ints, strings and Fractions to :class:`Fraction`; pass others through."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    return value


def basis(n: int, p: int) -> list[tuple[int, ...]]:
    """Increasing multi-indices of length ``p`` over ``1..n`` in lexicographic order."""
    return list(combinations(range(1, n + 1), p))


def sort_sign(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sort ``indices``, returning the permutation sign and the sorted tuple.

    The sign is ``0`` when an index repeats.
    """
    seq = list(indices)
    if len(set(seq)) != len(seq):
        return 0, ()
    inversions = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(seq))


class _Alternating:
    __slots__ = ("n", "degree", "_terms")
    part = ""

    def __init__(self, n: int, degree: int, terms: Mapping | None = None):
        if n < 0 or degree < 0:
            raise ValueError("dimension and degree must be nonnegative")
        clean = {}
        for key, coeff in (terms or {}).items():
            idx = tuple(int(i) for i in key)
            if len(idx) != degree:
                raise DegreeMismatch(f"index {idx} does not have length {degree}")
            if any(i < 1 or i > n for i in idx):
                raise ValueError(f"index {idx} out of range 1..{n}")
            sign, srt = sort_sign(idx)
            if sign == 0:
                continue
            coeff = as_scalar(coeff)
            if sign < 0:
                coeff = -coeff
            if srt in clean:
                coeff = clean[srt] + coeff
            clean[srt] = coeff
        self.n = n
        self.degree = degree
        self._terms = MappingProxyType(
            {k: clean[k] for k in sorted(clean) if clean[k] != 0}
        )

    @classmethod
    def _raw(cls, n, degree, terms):
        # terms already sorted-key, nonzero; skips validation on hot paths
        obj = cls.__new__(cls)
        obj.n = n
        obj.degree = degree
        obj._terms = MappingProxyType({k: terms[k] for k in sorted(terms)})
        return obj

    @classmethod
    def zero(cls, n: int, degree: int):
        return cls._raw(n, degree, {})

    @classmethod
    def from_dense(cls, n: int, degree: int, coords: Sequence):
        idx = basis(n, degree)
        if len(coords) != len(idx):
            raise DegreeMismatch(f"expected {len(idx)} coordinates, got {len(coords)}")
        terms = {}
        for key, c in zip(idx, coords):
            c = as_scalar(c)
            if c != 0:
                terms[key] = c
        return cls._raw(n, degree, terms)

    @property
    def terms(self) -> Mapping[tuple[int, ...], object]:
        return self._terms

    def items(self):
        return self._terms.items()

    def __getitem__(self, key) -> object:
        sign, srt = sort_sign(key)
        if sign == 0:
            return Fraction(0)
        c = self._terms.get(srt, Fraction(0))
        return c if sign > 0 else -c

    def dense(self) -> list:
        return [self._terms.get(key, Fraction(0)) for key in basis(self.n, self.degree)]

    def dim(self) -> int:
        """Dimension of the space this element lives in, ``C(n, degree)``."""
        return comb(self.n, self.degree)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.n != self.n:
            raise AmbientMismatch(f"ambient dimensions differ: {self.n} vs {other.n}")
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees differ: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if not isinstance(other, _Alternating):
            return NotImplemented
        self._check(other)
        terms = dict(self._terms)
        for key, c in other._terms.items():
            s = terms.get(key, 0) + c
            if s != 0:
                terms[key] = s
            else:
                terms.pop(key, None)
        return type(self)._raw(self.n, self.degree, terms)

    def __neg__(self):
        return type(self)._raw(self.n, self.degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, _Alternating):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, _Alternating):
            return NotImplemented
        scalar = as_scalar(scalar)
        terms = {}
        for k, c in self._terms.items():
            v = c * scalar
            if v != 0:
                terms[k] = v
        return type(self)._raw(self.n, self.degree, terms)

    __rmul__ = __mul__

    def map(self, fn):
        """Apply ``fn`` to every coefficient, dropping results equal to zero."""
        terms = {}
        for k, c in self._terms.items():
            v = fn(c)
            if v != 0:
                terms[k] = v
        return type(self)._raw(self.n, self.degree, terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if type(other) is not type(self):
            return NotImplemented
        return (
            self.n == other.n
            and self.degree == other.degree
            and dict(self._terms) == dict(other._terms)
        )

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.degree, frozenset(self._terms.items())))

    def scalar(self):
        """The coefficient of a degree-0 element."""
        if self.degree != 0:
            raise DegreeMismatch("only degree-0 elements have a scalar value")
        return self._terms.get((), Fraction(0))

    _symbol = "e"

    def to_str(self, symbol: str | None = None) -> str:
        if not self._terms:
            return "0"
        symbol = symbol or self._symbol
        pieces = []
        for key, c in self._terms.items():
            if key:
                name = self._name(symbol, key)
            else:
                name = ""
            cs = str(c)
            simple = all(ch not in cs.lstrip("-") for ch in "+- ")
            if name and cs in ("1", "-1"):
                text = ("-" if cs == "-1" else "") + name
            elif name:
                text = (cs if simple else f"({cs})") + "*" + name
            else:
                text = cs if simple else f"({cs})"
            pieces.append(text)
        out = pieces[0]
        for text in pieces[1:]:
            out += " - " + text[1:] if text.startswith("-") else " + " + text
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, degree={self.degree}, {self.to_str()})"


class Form(_Alternating):
    """An element of ``∧^p V*``."""

    __slots__ = ()
    part = "forms"

    @staticmethod
    def _name(symbol, key):
        if symbol == "dx":
            return "∧".join(f"dx{i}" for i in key)
        return f"{symbol}^{{{','.join(map(str, key))}}}"


class Multivector(_Alternating):
    """An element of ``∧^p V``."""

    __slots__ = ()
    part = "V"

    @staticmethod
    def _name(symbol, key):
        if symbol == "dx":
            return "∧".join(f"∂x{i}" for i in key)
        return f"{symbol}_{{{','.join(map(str, key))}}}"


def basis_form(n: int, *indices: int) -> Form:
    """``e^{i1} ∧ ... ∧ e^{ip}`` (indices in any order; sign applied)."""
    return Form(n, len(indices), {tuple(indices): 1})


def basis_vector(n: int, *indices: int) -> Multivector:
    """``e_{i1} ∧ ... ∧ e_{ip}``; with one index this is a basis vector of ``V``."""
    return Multivector(n, len(indices), {tuple(indices): 1})


def vector(n: int, coords: Sequence) -> Multivector:
    return Multivector.from_dense(n, 1, coords)


def wedge(a: _Alternating, b: _Alternating) -> _Alternating:
    if type(a) is not type(b):
        raise TypeError("wedge needs two forms or two multivectors")
    if a.n != b.n:
        raise AmbientMismatch(f"ambient dimensions differ: {a.n} vs {b.n}")
    terms: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            sign, key = sort_sign(ka + kb)
            if sign == 0:
                continue
            v = ca * cb
            if sign < 0:
                v = -v
            if key in terms:
                terms[key] = terms[key] + v
            else:
                terms[key] = v
    terms = {k: c for k, c in terms.items() if c != 0}
    return type(a)._raw(a.n, a.degree + b.degree, terms)


def _contract_terms(v_terms, a_terms):
    out: dict = {}
    for (j,), cv in v_terms:
        for key, ca in a_terms:
            try:
                s = key.index(j)
            except ValueError:
                continue
            rest = key[:s] + key[s + 1:]
            val = cv * ca
            if s % 2:
                val = -val
            if rest in out:
                out[rest] = out[rest] + val
            else:
                out[rest] = val
    return {k: c for k, c in out.items() if c != 0}


def contract(v: _Alternating, a: _Alternating) -> _Alternating:
    """Interior product by a degree-1 element of the opposite kind.

    ``contract(X, alpha)`` is ``i_X alpha`` for a vector ``X``; the mirror
    ``contract(xi, P)`` contracts a covector into a multivector.
    """
    if v.degree != 1:
        raise DegreeMismatch("contract expects a degree-1 first argument")
    if type(v) is type(a):
        raise TypeError("contract pairs a vector with a form (or a covector with a multivector)")
    if v.n != a.n:
        raise AmbientMismatch(f"ambient dimensions differ: {v.n} vs {a.n}")
    if a.degree == 0:
        raise DegreeMismatch("cannot contract into a degree-0 element")
    return type(a)._raw(a.n, a.degree - 1, _contract_terms(v.items(), a.items()))


def contract_multi(P: _Alternating, a: _Alternating) -> _Alternating:
    """``i_P a`` for decomposable ``P = X1∧...∧Xq``: ``i_{X1} ∘ ... ∘ i_{Xq}``, extended linearly."""
    if type(P) is type(a):
        raise TypeError("contract_multi pairs a multivector with a form")
    if P.n != a.n:
        raise AmbientMismatch(f"ambient dimensions differ: {P.n} vs {a.n}")
    if P.degree > a.degree:
        raise DegreeMismatch(f"cannot contract degree {P.degree} into degree {a.degree}")
    total: dict = {}
    for key, cp in P.items():
        cur = a.items()
        for j in reversed(key):
            cur = _contract_terms([((j,), 1)], cur).items()
        for k, c in cur:
            val = cp * c
            total[k] = total[k] + val if k in total else val
    total = {k: c for k, c in total.items() if c != 0}
    return type(a)._raw(a.n, a.degree - P.degree, total)


def evaluate(a: _Alternating, vectors: Iterable[_Alternating]):
    """``a(v1, ..., vp) = i_{vp}(... i_{v1} a)`` as a coefficient."""
    cur = a
    for v in vectors:
        cur = contract(v, cur)
    return cur.scalar()
