"""Calculus with polynomial coefficients on ℝⁿ: d, Lie brackets, the Dorfman bracket.

Polynomial forms and vector fields are ordinary :class:`Form` and
:class:`Multivector` values whose coefficients are :class:`Poly`.
Subbundles of ``Tℝⁿ ⊕ ∧^k T*ℝⁿ`` are presented by frames and tested for
involutivity pointwise at rational sample points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DegreeMismatch, RankDrop
from .exterior import Form, Multivector, _Alternating, basis, contract, contract_multi, sort_sign
from .poly import Poly
from .subspace import Ambient, GradedElement, Subspace, join_terms, span_of


def to_poly(c, n: int) -> Poly:
    if isinstance(c, Poly):
        return c
    if isinstance(c, str):
        return Poly.parse(c, n)
    return Poly.const(n, c)


def poly_form(n: int, p: int, terms: Mapping | None = None) -> Form:
    """A p-form with polynomial coefficients; strings are parsed."""
    return Form(n, p, {I: to_poly(c, n) for I, c in (terms or {}).items()})


def poly_vector(n: int, comps: Sequence) -> Multivector:
    """A vector field from its ``n`` components (polynomials, numbers or strings)."""
    if len(comps) != n:
        raise DegreeMismatch(f"expected {n} components, got {len(comps)}")
    return Multivector(n, 1, {(i + 1,): to_poly(c, n) for i, c in enumerate(comps)})


def coord_field(n: int, i: int) -> Multivector:
    """``∂/∂x_i``."""
    return Multivector(n, 1, {(i,): Poly.const(n, 1)})


def lift(a: _Alternating) -> _Alternating:
    """Turn constant coefficients into constant polynomials."""
    return a.map(lambda c: to_poly(c, a.n))


def at(a, point: Sequence):
    """Evaluate polynomial coefficients at ``point``; works on forms, vectors and sections."""
    if isinstance(a, GradedElement):
        return GradedElement(at(a.vec, point), at(a.form, point))
    point = [Fraction(x) for x in point]
    return a.map(lambda c: c(point) if isinstance(c, Poly) else c)


def _diff(c, j):
    return c.diff(j) if isinstance(c, Poly) else 0


def d(alpha: Form) -> Form:
    """Exterior derivative of a polynomial form."""
    n = alpha.n
    terms: dict = {}
    for I, c in alpha.items():
        for j in range(1, n + 1):
            if j in I:
                continue
            dc = _diff(c, j)
            if not dc:
                continue
            sign, key = sort_sign((j,) + I)
            v = dc if sign > 0 else -dc
            terms[key] = terms[key] + v if key in terms else v
    return Form(n, alpha.degree + 1, {k: v for k, v in terms.items() if v != 0})


def apply_field(X: Multivector, f) -> Poly:
    """``X(f) = Σ X^j ∂_j f``."""
    n = X.n
    f = to_poly(f, n)
    total = Poly.const(n, 0)
    for (j,), c in X.items():
        total = total + c * f.diff(j)
    return total


def lie_bracket(X: Multivector, Y: Multivector) -> Multivector:
    n = X.n
    terms = {}
    for i in range(1, n + 1):
        v = apply_field(X, Y[(i,)]) - apply_field(Y, X[(i,)])
        if v:
            terms[(i,)] = v
    return Multivector(n, 1, terms)


def interior(X: Multivector, alpha: Form) -> Form:
    """``i_X α``, with ``i_X f = 0`` on functions."""
    if alpha.degree == 0:
        return Form.zero(alpha.n, 0)
    return contract(X, alpha)


def lie_derivative(X: Multivector, alpha: Form) -> Form:
    """``L_X α = d i_X α + i_X dα``."""
    if alpha.degree == 0:
        return Form(alpha.n, 0, {(): apply_field(X, alpha[()])})
    return d(interior(X, alpha)) + interior(X, d(alpha))


def lie_derivative_direct(X: Multivector, alpha: Form) -> Form:
    """``L_X α`` from the coordinate formula ``Σ X(a_I) dx_I + Σ a_I d(X^i) ∧ ...``.

    Independent of Cartan's formula; used as a cross-check.
    """
    n = alpha.n
    out = Form(n, alpha.degree, {I: apply_field(X, c) for I, c in alpha.items()})
    for I, c in alpha.items():
        for s, i in enumerate(I):
            dXi = d(Form(n, 0, {(): to_poly(X[(i,)], n)}))
            for (j,), g in dXi.items():
                key = I[:s] + (j,) + I[s + 1:]
                out = out + Form(n, alpha.degree, {key: c * g})
    return out


class PolySection(GradedElement):
    """A section ``X + α`` of ``Tℝⁿ ⊕ ∧^k T*ℝⁿ`` with polynomial coefficients."""

    def __add__(self, other):
        return PolySection(self.vec + other.vec, self.form + other.form)

    def __sub__(self, other):
        return PolySection(self.vec - other.vec, self.form - other.form)

    def __neg__(self):
        return PolySection(-self.vec, -self.form)

    def __mul__(self, c):
        return PolySection(self.vec * c, self.form * c)

    __rmul__ = __mul__

    def at(self, point) -> GradedElement:
        return at(GradedElement(self.vec, self.form), point)

    def to_str(self):
        return join_terms([self.vec.to_str("dx"), self.form.to_str("dx")])

    __str__ = to_str


def section(vec: Multivector | None = None, form: Form | None = None, n=None, k=None) -> PolySection:
    if n is None:
        n = (vec or form).n
    vec = lift(vec) if vec is not None else Multivector.zero(n, 1)
    form = lift(form) if form is not None else Form.zero(n, k)
    return PolySection(vec, form)


def courant_dorfman(a: GradedElement, b: GradedElement) -> PolySection:
    """``[[X+α, Y+β]] = [X,Y] + L_X β - i_Y dα``."""
    X, alpha = a.vec, a.form
    Y, beta = b.vec, b.form
    return PolySection(lie_bracket(X, Y), lie_derivative(X, beta) - interior(Y, d(alpha)))


def pairing_sections(a: GradedElement, b: GradedElement) -> Form:
    return interior(a.vec, b.form) + interior(b.vec, a.form)


# -- frames --------------------------------------------------------------


def random_point(rng, n: int) -> tuple:
    return tuple(Fraction(rng.randint(-12, 12), rng.randint(1, 5)) for _ in range(n))


class Frame:
    """Polynomial generators of a constant-rank subbundle plus sample points."""

    def __init__(self, generators: Sequence[GradedElement], samples: Sequence[Sequence] | None = None,
                 count: int = 25, seed=0, n: int | None = None, k: int | None = None):
        gens = [PolySection(lift(g.vec), lift(g.form)) for g in generators]
        if gens:
            n, k = gens[0].n, gens[0].k
        if n is None or k is None:
            raise ValueError("an empty frame needs explicit n and k")
        self.n, self.k = n, k
        self.generators = tuple(gens)
        self.ambient = Ambient(n, k, "graded", allow_edge=k >= n)
        if samples is None:
            self.samples = tuple(self._draw(count, seed))
        else:
            self.samples = tuple(tuple(Fraction(x) for x in p) for p in samples)
            for p in self.samples:
                self.at(p)  # raises on a rank drop

    def _draw(self, count, seed):
        rng = seed if isinstance(seed, random.Random) else random.Random(seed)
        out = []
        tries = 0
        while len(out) < count:
            tries += 1
            if tries > 50 * count + 100:
                raise RankDrop(out[-1] if out else (0,) * self.n, -1, len(self.generators))
            p = random_point(rng, self.n)
            if self.rank_at(p) == len(self.generators):
                out.append(p)
        return out

    def rank_at(self, point) -> int:
        return span_of([g.at(point) for g in self.generators], self.ambient).dim

    def at(self, point) -> Subspace:
        """The fibre at ``point`` as an exact subspace."""
        S = span_of([g.at(point) for g in self.generators], self.ambient)
        if S.dim != len(self.generators):
            raise RankDrop(tuple(point), S.dim, len(self.generators))
        return S

    def with_samples(self, samples) -> "Frame":
        return Frame(self.generators, samples, n=self.n, k=self.k)

    def __len__(self):
        return len(self.generators)


@dataclass
class Verdict:
    """Outcome of an involutivity test; falsy with a witness when it fails."""

    ok: bool
    point: tuple | None = None
    pair: tuple | None = None
    bracket: PolySection | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "yes"
        pt = ", ".join(str(c) for c in self.point)
        return f"no (at ({pt}), generators {self.pair}, bracket {self.bracket})"


def involutive(frame: Frame) -> Verdict:
    """Test closure of the frame under the Dorfman bracket at every sample point."""
    gens = frame.generators
    brackets = {}
    for a in range(len(gens)):
        for b in range(len(gens)):
            brackets[(a, b)] = courant_dorfman(gens[a], gens[b])
    for p in frame.samples:
        fibre = frame.at(p)
        for (a, b), br in brackets.items():
            if not fibre.contains(br.at(p)):
                return Verdict(False, p, (a, b), br)
    return Verdict(True)


# -- standard frames -----------------------------------------------------


def graph_frame(omega: Form, **kw) -> Frame:
    """Generators ``∂_i + i_{∂_i} ω`` of the graph of a polynomial ``(k+1)``-form."""
    n = omega.n
    omega = lift(omega)
    gens = [PolySection(coord_field(n, i), contract(coord_field(n, i), omega)) for i in range(1, n + 1)]
    return Frame(gens, n=n, k=omega.degree - 1, **kw)


def top_multivector_frame(pi: Multivector, **kw) -> Frame:
    """Generators ``i_α π + α`` over the basis ``(n-1)``-forms."""
    n = pi.n
    if pi.degree != n:
        raise DegreeMismatch("expected a top-degree multivector")
    pi = lift(pi)
    gens = []
    for I in basis(n, n - 1):
        a = Form(n, n - 1, {I: Poly.const(n, 1)})
        gens.append(PolySection(contract_multi(a, pi), a))
    return Frame(gens, n=n, k=n - 1, **kw)


# -- the field-theory structure -----------------------------------------


@dataclass
class FieldTheory:
    """Coordinates ``(x_1..x_m, y_1..y_N, p_{11}..p_{Nm})`` and the data ``S, Λ``."""

    m: int
    N: int

    @property
    def n(self):
        return self.m + self.N + self.N * self.m

    def x(self, i):
        return i

    def y(self, l):
        return self.m + l

    def p(self, l, i):
        return self.m + self.N + (l - 1) * self.m + i

    def _eta(self, skip):
        return tuple(self.x(j) for j in range(1, self.m + 1) if j != skip)

    def generators(self):
        """``(s, Λ s)`` for the spanning forms ``α_l``, ``dx_1…dx_m`` and ``γ_{li}``."""
        n, m = self.n, self.m
        out = []
        for l in range(1, self.N + 1):
            alpha = Form(n, m, {})
            for i in range(1, m + 1):
                alpha = alpha + Form(n, m, {(self.p(l, i),) + self._eta(i): 1})
            out.append((alpha, Multivector(n, 1, {(self.y(l),): 1})))
        out.append((Form(n, m, {tuple(range(1, m + 1)): 1}), Multivector.zero(n, 1)))
        for l in range(1, self.N + 1):
            for i in range(1, m + 1):
                gamma = Form(n, m, {(self.y(l),) + self._eta(i): 1})
                out.append((gamma, Multivector(n, 1, {(self.p(l, i),): -1})))
        return out

    def subspace(self) -> Subspace:
        amb = Ambient(self.n, self.m, "graded")
        return span_of([GradedElement(v, s) for s, v in self.generators()], amb)


def field_theory_fixture(m: int, n_fib: int, samples: int = 10, seed=0):
    """The frame of ``gr(Λ_red)`` and the higher Poisson pair at each sample point."""
    from .dirac import extract_higher_poisson

    if m < 1 or n_fib < 1:
        raise ValueError("need m ≥ 1 and n_fib ≥ 1")
    ft = FieldTheory(m, n_fib)
    if ft.n - 1 < m:
        raise DegreeMismatch("the ambient is too small")
    gens = [PolySection(lift(v), lift(s)) for s, v in ft.generators()]
    # the generators α_l, dx_1..dx_m, γ_li are independent, so the frame has full rank
    frame = Frame(gens, count=samples, seed=seed, n=ft.n, k=m)
    pairs = [extract_higher_poisson(frame.at(p)) for p in frame.samples]
    return frame, pairs
