"""Canonical subspaces of ``V``, ``∧^k V*`` and ``V ⊕ ∧^k V*``.

A :class:`Subspace` is kept in reduced row-echelon form over ℚ, so two
subspaces are equal exactly when their matrices coincide.  Graded coordinates
put the ``n`` vector components first, then the ``C(n, k)`` form coefficients
in lexicographic multi-index order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from . import linalg
from .errors import AmbientMismatch, DegreeMismatch
from .exterior import Form, Multivector, basis, contract

PARTS = ("V", "forms", "graded")


@dataclass(frozen=True)
class Ambient:
    """Which space a subspace lives in: ``V``, ``∧^k V*`` or their sum.

    ``1 ≤ k ≤ n-1`` is enforced unless ``allow_edge`` is set; restriction to
    a small subspace ``W`` legitimately produces ``k ≥ dim W``.
    """

    n: int
    k: int
    part: str = "graded"
    allow_edge: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        if self.part not in PARTS:
            raise ValueError(f"unknown ambient part {self.part!r}")
        if self.n < 1 or self.k < 1:
            raise DegreeMismatch(f"need n ≥ 1 and k ≥ 1, got n={self.n}, k={self.k}")
        if not self.allow_edge and self.k > self.n - 1:
            raise DegreeMismatch(f"need 1 ≤ k ≤ n-1, got n={self.n}, k={self.k}")

    @property
    def nforms(self) -> int:
        return comb(self.n, self.k)

    @property
    def ncols(self) -> int:
        if self.part == "V":
            return self.n
        if self.part == "forms":
            return self.nforms
        return self.n + self.nforms

    def with_part(self, part: str) -> "Ambient":
        return Ambient(self.n, self.k, part, self.allow_edge)


@dataclass(frozen=True)
class GradedElement:
    """``X + α`` with ``X ∈ V`` and ``α ∈ ∧^k V*``."""

    vec: Multivector
    form: Form

    def __post_init__(self):
        if self.vec.degree != 1:
            raise DegreeMismatch("vector part must have degree 1")
        if self.vec.n != self.form.n:
            raise AmbientMismatch("vector and form parts live over different V")

    @property
    def n(self) -> int:
        return self.vec.n

    @property
    def k(self) -> int:
        return self.form.degree

    def __add__(self, other):
        return GradedElement(self.vec + other.vec, self.form + other.form)

    def __sub__(self, other):
        return GradedElement(self.vec - other.vec, self.form - other.form)

    def __neg__(self):
        return GradedElement(-self.vec, -self.form)

    def __mul__(self, c):
        return GradedElement(self.vec * c, self.form * c)

    __rmul__ = __mul__

    def __str__(self):
        return join_terms([self.vec.to_str(), self.form.to_str()])


def join_terms(parts) -> str:
    """``"a + b"`` for printed summands, folding a leading minus into the operator."""
    parts = [p for p in parts if p != "0"]
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def pairing(u: GradedElement, v: GradedElement) -> Form:
    """``⟨X+α, Y+β⟩ = i_X β + i_Y α``, a ``(k-1)``-form."""
    return contract(u.vec, v.form) + contract(v.vec, u.form)


# -- coordinates ---------------------------------------------------------


def coords(ambient: Ambient, element) -> tuple:
    n, k = ambient.n, ambient.k
    if ambient.part == "V":
        _check_vec(element, n)
        return tuple(element.dense())
    if ambient.part == "forms":
        _check_form(element, n, k)
        return tuple(element.dense())
    if isinstance(element, Multivector):
        element = GradedElement(element, Form.zero(n, k))
    elif isinstance(element, Form):
        element = GradedElement(Multivector.zero(n, 1), element)
    _check_vec(element.vec, n)
    _check_form(element.form, n, k)
    return tuple(element.vec.dense()) + tuple(element.form.dense())


def _check_vec(v, n):
    if not isinstance(v, Multivector) or v.degree != 1:
        raise DegreeMismatch("expected a vector (degree-1 multivector)")
    if v.n != n:
        raise AmbientMismatch(f"vector lives in dimension {v.n}, ambient has n={n}")


def _check_form(f, n, k):
    if not isinstance(f, Form):
        raise DegreeMismatch("expected a form")
    if f.n != n:
        raise AmbientMismatch(f"form lives in dimension {f.n}, ambient has n={n}")
    if f.degree != k:
        raise DegreeMismatch(f"expected a {k}-form, got degree {f.degree}")


def element(ambient: Ambient, row: Sequence):
    n, k = ambient.n, ambient.k
    if ambient.part == "V":
        return Multivector.from_dense(n, 1, row)
    if ambient.part == "forms":
        return Form.from_dense(n, k, row)
    return GradedElement(Multivector.from_dense(n, 1, row[:n]), Form.from_dense(n, k, row[n:]))


# -- the subspace type ---------------------------------------------------


class Subspace:
    """A subspace in canonical reduced row-echelon form."""

    __slots__ = ("ambient", "rows")

    def __init__(self, ambient: Ambient, rows: Iterable[Sequence] = ()):
        self.ambient = ambient
        self.rows = tuple(linalg.rref(rows, ambient.ncols))

    @classmethod
    def _canonical(cls, ambient, rows):
        obj = cls.__new__(cls)
        obj.ambient = ambient
        obj.rows = tuple(rows)
        return obj

    @property
    def dim(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def basis(self) -> list:
        return [element(self.ambient, r) for r in self.rows]

    def pivots(self) -> list[int]:
        return [next(i for i, x in enumerate(r) if x) for r in self.rows]

    def _same(self, other):
        if not isinstance(other, Subspace):
            raise TypeError("expected a Subspace")
        if other.ambient != self.ambient:
            raise AmbientMismatch(f"{self.ambient} vs {other.ambient}")

    def contains(self, item) -> bool:
        """Membership of an element, or inclusion of a subspace."""
        if isinstance(item, Subspace):
            self._same(item)
            ech = linalg.Echelon(self.ambient.ncols, self.rows)
            return all(ech.contains(r) for r in item.rows)
        row = coords(self.ambient, item)
        return linalg.Echelon(self.ambient.ncols, self.rows).contains(row)

    def __contains__(self, item):
        return self.contains(item)

    def __le__(self, other):
        return other.contains(self)

    def __ge__(self, other):
        return self.contains(other)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.rows == other.rows

    def __hash__(self):
        return hash((self.ambient, self.rows))

    def __add__(self, other):
        return sum_(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def __repr__(self):
        a = self.ambient
        gens = ", ".join(str(e) for e in self.basis())
        return f"Subspace(n={a.n}, k={a.k}, {a.part}, span{{{gens}}})"

    __str__ = __repr__


def span_of(elements: Iterable, ambient: Ambient | None = None) -> Subspace:
    """Canonical span of vectors, forms or graded elements.

    With no ``ambient`` the graded ambient is inferred from the first element;
    an empty list therefore needs an explicit ambient.
    """
    elements = list(elements)
    if ambient is None:
        if not elements:
            raise ValueError("span of no elements needs an explicit ambient")
        first = elements[0]
        if not isinstance(first, GradedElement):
            raise ValueError("pass an ambient when spanning bare vectors or forms")
        ambient = Ambient(first.n, first.k, "graded")
    return Subspace(ambient, [coords(ambient, e) for e in elements])


def zero(ambient: Ambient) -> Subspace:
    return Subspace._canonical(ambient, ())


def whole(ambient: Ambient) -> Subspace:
    m = ambient.ncols
    one, nil = Fraction(1), Fraction(0)
    return Subspace._canonical(
        ambient, [tuple(one if j == i else nil for j in range(m)) for i in range(m)]
    )


def vectors(n: int, k: int) -> Subspace:
    """``V`` as a subspace of ``V ⊕ ∧^k V*``."""
    return embed(whole(Ambient(n, k, "V")))


def all_forms(n: int, k: int) -> Subspace:
    """``∧^k V*`` as a subspace of ``V ⊕ ∧^k V*``."""
    return embed(whole(Ambient(n, k, "forms")))


def embed(sub: Subspace) -> Subspace:
    """Include a subspace of ``V`` or of ``∧^k V*`` into the graded ambient."""
    a = sub.ambient
    if a.part == "graded":
        return sub
    g = a.with_part("graded")
    zero_v = (Fraction(0),) * a.n
    zero_f = (Fraction(0),) * a.nforms
    if a.part == "V":
        rows = [tuple(r) + zero_f for r in sub.rows]
    else:
        rows = [zero_v + tuple(r) for r in sub.rows]
    return Subspace._canonical(g, rows)


def sum_(a: Subspace, b: Subspace) -> Subspace:
    a._same(b)
    return Subspace(a.ambient, a.rows + b.rows)


def complement_rows(sub: Subspace) -> list:
    """Rows spanning the orthogonal complement for the coordinate dot product."""
    return linalg.nullspace(sub.rows, sub.ambient.ncols)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    a._same(b)
    if a.is_zero() or b.is_zero():
        return zero(a.ambient)
    m = a.ambient.ncols
    eqs = complement_rows(a) + complement_rows(b)
    return Subspace(a.ambient, linalg.nullspace(eqs, m))


def contains(a: Subspace, item) -> bool:
    return a.contains(item)


def equals(a: Subspace, b: Subspace) -> bool:
    a._same(b)
    return a == b


# -- projections and intersections with the summands ---------------------


def _graded(L: Subspace):
    if L.ambient.part != "graded":
        raise AmbientMismatch(f"expected a subspace of V ⊕ ∧^kV*, got {L.ambient.part}")


def proj1(L: Subspace) -> Subspace:
    """``pr₁(L) ⊆ V``; read off the echelon rows with vector pivots."""
    _graded(L)
    n = L.ambient.n
    rows = [r[:n] for r in L.rows if any(r[:n])]
    return Subspace._canonical(L.ambient.with_part("V"), rows)


def meet_forms(L: Subspace) -> Subspace:
    """``L ∩ ∧^k V*`` as a subspace of ``∧^k V*``."""
    _graded(L)
    n = L.ambient.n
    rows = [r[n:] for r in L.rows if not any(r[:n])]
    return Subspace._canonical(L.ambient.with_part("forms"), rows)


def proj2(L: Subspace) -> Subspace:
    _graded(L)
    n = L.ambient.n
    return Subspace(L.ambient.with_part("forms"), [r[n:] for r in L.rows])


def _forms_first(L: Subspace) -> list[tuple]:
    n = L.ambient.n
    return linalg.rref([tuple(r[n:]) + tuple(r[:n]) for r in L.rows], L.ambient.ncols)


def meet_vectors(L: Subspace) -> Subspace:
    """``L ∩ V`` as a subspace of ``V``."""
    _graded(L)
    m = L.ambient.nforms
    rows = [r[m:] for r in _forms_first(L) if not any(r[:m])]
    return Subspace._canonical(L.ambient.with_part("V"), rows)


def forms_first_rows(L: Subspace) -> list[tuple]:
    """Echelon rows of ``L`` with the form columns ordered first, as ``(form, vec)`` pairs."""
    _graded(L)
    m = L.ambient.nforms
    return [(r[:m], r[m:]) for r in _forms_first(L)]


# -- annihilators and the pairing orthogonal -----------------------------


@lru_cache(maxsize=None)
def _contraction_table(n: int, k: int):
    """For each k-form basis index: tuples ``(i, J-position, sign)`` with ``i_{e_i} e^I = sign e^J``."""
    lower = {J: j for j, J in enumerate(basis(n, k - 1))}
    table = []
    for I in basis(n, k):
        entries = []
        for s, i in enumerate(I):
            J = I[:s] + I[s + 1:]
            entries.append((i - 1, lower[J], -1 if s % 2 else 1))
        table.append(tuple(entries))
    return tuple(table), len(lower)


def ann_in_V(A: Subspace) -> Subspace:
    """``A° = {X ∈ V : i_X η = 0 for all η ∈ A}``."""
    if A.ambient.part != "forms":
        raise AmbientMismatch("ann_in_V expects a subspace of forms")
    n, k = A.ambient.n, A.ambient.k
    table, nlow = _contraction_table(n, k)
    ech = linalg.Echelon(n)
    for eta in A.rows:
        eta = linalg.int_row(eta)
        rows = [[0] * n for _ in range(nlow)]
        for c, coeff in enumerate(eta):
            if coeff:
                for i, j, s in table[c]:
                    rows[j][i] += s * coeff
        for r in rows:
            if any(r):
                ech.add(r)
        if ech.full():
            return zero(A.ambient.with_part("V"))
    return Subspace(A.ambient.with_part("V"), linalg.nullspace(ech.rref(), n))


def ann_in_forms(E: Subspace) -> Subspace:
    """``Ann(E) = {α ∈ ∧^k V* : i_Y α = 0 for all Y ∈ E}``."""
    if E.ambient.part != "V":
        raise AmbientMismatch("ann_in_forms expects a subspace of V")
    n, k = E.ambient.n, E.ambient.k
    table, nlow = _contraction_table(n, k)
    m = len(table)
    ech = linalg.Echelon(m)
    for Y in E.rows:
        Y = linalg.int_row(Y)
        rows = [[0] * m for _ in range(nlow)]
        for c in range(m):
            for i, j, s in table[c]:
                if Y[i]:
                    rows[j][c] += s * Y[i]
        for r in rows:
            if any(r):
                ech.add(r)
        if ech.full():
            return zero(E.ambient.with_part("forms"))
    return Subspace(E.ambient.with_part("forms"), linalg.nullspace(ech.rref(), m))


def pairing_rows(n: int, k: int, row: Sequence) -> list[list]:
    """Matrix of ``w ↦ ⟨w, l⟩`` for ``l`` with coordinates ``row``, up to a scalar.

    One row per ``(k-1)``-form basis element, one column per graded coordinate.
    """
    table, nlow = _contraction_table(n, k)
    N = n + len(table)
    out = [[0] * N for _ in range(nlow)]
    row = linalg.int_row(row)  # scaling l does not change the constraints
    Y, beta = row[:n], row[n:]
    for c, entries in enumerate(table):
        b = beta[c]
        for i, j, s in entries:
            if b:
                out[j][i] += s * b
            if Y[i]:
                out[j][n + c] += s * Y[i]
    return out


def perp(L: Subspace) -> Subspace:
    """``L^⊥`` for the ``∧^{k-1}V*``-valued pairing, as an explicit kernel."""
    _graded(L)
    n, k = L.ambient.n, L.ambient.k
    N = L.ambient.ncols
    ech = linalg.Echelon(N)
    for row in L.rows:
        for r in pairing_rows(n, k, row):
            if any(r):
                ech.add(r)
        if ech.full():
            return zero(L.ambient)
    return Subspace(L.ambient, linalg.nullspace(ech.rref(), N))


def is_isotropic(L: Subspace) -> bool:
    return isotropy_violation(L) is None


def isotropy_violation(L: Subspace):
    """A pair of basis elements with nonzero pairing, or ``None``."""
    _graded(L)
    n, k = L.ambient.n, L.ambient.k
    table, _ = _contraction_table(n, k)
    rows = L.rows
    for a in range(len(rows)):
        ra = rows[a]
        for b in range(a, len(rows)):
            rb = rows[b]
            acc = {}
            for c, entries in enumerate(table):
                ba, bb = ra[n + c], rb[n + c]
                if not (ba or bb):
                    continue
                for i, j, s in entries:
                    v = ra[i] * bb + rb[i] * ba
                    if v:
                        acc[j] = acc.get(j, 0) + s * v
            if any(acc.values()):
                return element(L.ambient, ra), element(L.ambient, rb)
    return None


def witness(a: Subspace, b: Subspace):
    """An element of one subspace missing from the other, or ``None`` if equal."""
    a._same(b)
    ech_b = linalg.Echelon(a.ambient.ncols, b.rows)
    for r in a.rows:
        if not ech_b.contains(r):
            return element(a.ambient, r)
    ech_a = linalg.Echelon(a.ambient.ncols, a.rows)
    for r in b.rows:
        if not ech_a.contains(r):
            return element(a.ambient, r)
    return None
