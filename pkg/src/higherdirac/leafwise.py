"""The leafwise complex of a regular isotropic subbundle on a flat chart.

The leaves are the coordinate planes spanned by ``∂x_i`` for ``i`` in
``leaf``; every computation is done globally on the chart, i.e. for the
whole foliation at once.  Forms with values in ``F = ∧^k T*M / A_L`` are
stored as polynomial k-form representatives; statements "mod A_L" are
decided symbolically when ``A_L`` has constant coefficients and at the
sample points otherwise.

For coordinate fields all brackets vanish, so the differential reads

    δθ(X_0..X_p) = Σ_j (-1)^j L_{X_j} θ(..X̂_j..) - (-1)^p d i_{X_p} θ(X_0..X_{p-1}).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg
from .errors import InvariantViolation, RankDrop
from .exterior import Form, Multivector, basis, evaluate, sort_sign
from .geometry import (
    Frame,
    PolySection,
    at,
    coord_field,
    d,
    interior,
    lie_derivative,
    lift,
    random_point,
    to_poly,
)
from .poly import Poly
from .subspace import Ambient, Subspace, ann_in_V


def _poly_parts(form: Form) -> dict:
    """Split a polynomial form into ``{exponent: constant form}``."""
    parts: dict = {}
    for I, c in form.items():
        c = to_poly(c, form.n)
        for e, v in c.terms.items():
            parts.setdefault(e, {})[I] = v
    return {e: Form(form.n, form.degree, t) for e, t in parts.items()}


class LeafModel:
    """A regular isotropic subbundle ``L(E, A_L, ε)`` with ``E`` spanned by coordinate fields.

    ``eps[i]`` is a representative of ``ε(∂x_{leaf[i]})``; ``A`` lists
    polynomial k-forms spanning ``A_L`` at every point.
    """

    def __init__(self, n: int, k: int, leaf: Sequence[int], A: Sequence[Form] = (), eps: Sequence[Form] = (),
                 samples=None, count: int = 10, seed=0):
        self.n, self.k = n, k
        self.leaf = tuple(leaf)
        if sorted(set(self.leaf)) != list(self.leaf) or any(not 1 <= i <= n for i in self.leaf):
            raise InvariantViolation("leaf", "leaf indices must be increasing and within 1..n")
        self.A = tuple(lift(a) for a in A)
        self.eps = tuple(lift(e) for e in eps)
        if len(self.eps) != len(self.leaf):
            raise InvariantViolation("eps", "one representative per leaf coordinate field is needed")
        for f in self.A + self.eps:
            if f.n != n or f.degree != k:
                raise InvariantViolation("degrees", f"expected {k}-forms on an {n}-dimensional chart")
        self.forms_ambient = Ambient(n, k, "forms", allow_edge=k >= n)
        self.A_constant = all(to_poly(c, n).is_constant() for a in self.A for _, c in a.items())
        if self.A_constant:
            self._A_const = Subspace(self.forms_ambient, [at(a, (0,) * n).dense() for a in self.A])
            if self._A_const.dim != len(self.A):
                raise RankDrop((0,) * n, self._A_const.dim, len(self.A))
        if samples is None:
            rng = seed if isinstance(seed, random.Random) else random.Random(seed)
            pts = []
            tries = 0
            while len(pts) < count:
                tries += 1
                p = random_point(rng, n)
                if self.A_rank(p) == len(self.A):
                    pts.append(p)
                elif tries > 50 * count:
                    raise RankDrop(p, self.A_rank(p), len(self.A))
            self.samples = tuple(pts)
        else:
            self.samples = tuple(tuple(Fraction(x) for x in p) for p in samples)
            for p in self.samples:
                if self.A_rank(p) != len(self.A):
                    raise RankDrop(p, self.A_rank(p), len(self.A))

    @property
    def m(self) -> int:
        return len(self.leaf)

    def transverse(self) -> tuple:
        return tuple(i for i in range(1, self.n + 1) if i not in self.leaf)

    def A_at(self, point) -> Subspace:
        return Subspace(self.forms_ambient, [at(a, point).dense() for a in self.A])

    def A_rank(self, point) -> int:
        return self.A_at(point).dim

    def in_A(self, form: Form) -> bool:
        """Whether ``form`` is a section of ``A_L``."""
        if form == 0:
            return True
        if self.A_constant:
            return all(f in self._A_const for f in _poly_parts(form).values())
        return all(at(form, p) in self.A_at(p) for p in self.samples)

    def equiv(self, a: Form, b: Form) -> bool:
        return self.in_A(a - b)

    def field(self, i: int) -> Multivector:
        if i not in self.leaf:
            raise InvariantViolation("leaf field", f"∂x{i} is not tangent to the leaves")
        return coord_field(self.n, i)

    def epsilon(self) -> "SkewForm":
        return SkewForm(self, 1, {(i,): e for i, e in zip(self.leaf, self.eps)})

    def to_frame(self, samples=None) -> Frame:
        """Generators ``∂x_i + ε(∂x_i)`` and the forms spanning ``A_L``."""
        gens = [PolySection(coord_field(self.n, i), e) for i, e in zip(self.leaf, self.eps)]
        zero = lift(Multivector.zero(self.n, 1))
        gens += [PolySection(zero, a) for a in self.A]
        return Frame(gens, samples if samples is not None else self.samples, n=self.n, k=self.k)

    def invariant_violations(self) -> list[str]:
        """Broken standing assumptions: ``A_L ⊆ Ann(TO)``, Lie invariance, skewness of ε."""
        out = []
        for a in self.A:
            for i in self.leaf:
                if interior(self.field(i), a) != 0:
                    out.append(f"A_L ⊄ Ann(TO): i_∂x{i} does not kill {a.to_str('dx')}")
                if not self.in_A(lie_derivative(self.field(i), a)):
                    out.append(f"A_L is not invariant under L_∂x{i}")
        if not is_TO_skew(self.epsilon()):
            out.append("ε is not TO-skew")
        return out

    def check(self):
        bad = self.invariant_violations()
        if bad:
            raise InvariantViolation("leaf model", bad[0])
        return self


def _tangent_field(model: LeafModel, X) -> Multivector:
    if isinstance(X, int):
        return model.field(X)
    for (j,), c in X.items():
        if j not in model.leaf and c != 0:
            raise InvariantViolation("leaf field", f"{X} is not tangent to the leaves")
    return lift(X)


def induced_lie(model: LeafModel, X, theta: Form) -> Form:
    """``L_X`` on representatives; ``X`` is a leaf index or a tangent vector field."""
    return lie_derivative(_tangent_field(model, X), lift(theta))


def induced_ixd(model: LeafModel, X, theta: Form) -> Form:
    return interior(_tangent_field(model, X), d(lift(theta)))


def induced_dix(model: LeafModel, X, theta: Form) -> Form:
    return d(interior(_tangent_field(model, X), lift(theta)))


class SkewForm:
    """A ``p``-form along the leaves with values in ``F``, stored on increasing leaf index tuples."""

    def __init__(self, model: LeafModel, p: int, values: dict | None = None):
        self.model = model
        self.p = p
        vals = {}
        zero = lift(Form.zero(model.n, model.k))
        for J in combinations(model.leaf, p):
            vals[J] = zero
        for J, f in (values or {}).items():
            sign, key = sort_sign(J)
            if key not in vals:
                raise InvariantViolation("leaf tuple", f"{J} is not a tuple of distinct leaf indices")
            f = lift(f)
            vals[key] = vals[key] + (f if sign > 0 else -f)
        self.values = vals

    def __call__(self, J: Sequence[int]) -> Form:
        sign, key = sort_sign(J)
        if sign == 0:
            return lift(Form.zero(self.model.n, self.model.k))
        v = self.values[key]
        return v if sign > 0 else -v

    def __add__(self, other):
        return SkewForm(self.model, self.p, {J: self.values[J] + other.values[J] for J in self.values})

    def __sub__(self, other):
        return SkewForm(self.model, self.p, {J: self.values[J] - other.values[J] for J in self.values})

    def __mul__(self, c):
        return SkewForm(self.model, self.p, {J: v * c for J, v in self.values.items()})

    def is_zero_mod_A(self) -> bool:
        return all(self.model.in_A(v) for v in self.values.values())

    def equiv(self, other) -> bool:
        return (self - other).is_zero_mod_A()

    def __str__(self):
        parts = []
        for J, v in self.values.items():
            if v != 0:
                args = ",".join(f"∂x{i}" for i in J)
                parts.append(f"({args}) ↦ {v.to_str('dx')}")
        return "; ".join(parts) if parts else "0"


def skew_witness(theta: SkewForm):
    """``(Z, J, s)`` with ``i_Z θ(J) + i_{J_s} θ(J[s ↦ Z]) ≠ 0``, or ``None``."""
    model = theta.model
    for J in theta.values:
        for z in model.leaf:
            iz = interior(model.field(z), theta(J))
            for s in range(theta.p):
                swapped = J[:s] + (z,) + J[s + 1:]
                other = interior(model.field(J[s]), theta(swapped))
                if iz + other != 0:
                    return z, J, s
    return None


def is_TO_skew(theta: SkewForm) -> bool:
    """``(Z, X_1..X_p) ↦ i_Z θ(X_1..X_p)`` is alternating."""
    return skew_witness(theta) is None


def delta_value(theta: SkewForm, X: Sequence[int]) -> Form:
    """``δθ(∂x_{X_0}, ..., ∂x_{X_p})`` for any ordered tuple of leaf indices."""
    model = theta.model
    p = theta.p
    if len(X) != p + 1:
        raise ValueError(f"δθ takes {p + 1} arguments")
    total = lift(Form.zero(model.n, model.k))
    for j in range(p + 1):
        rest = tuple(X[:j]) + tuple(X[j + 1:])
        term = lie_derivative(model.field(X[j]), theta(rest))
        total = total + (term if j % 2 == 0 else -term)
    last = d(interior(model.field(X[p]), theta(tuple(X[:p]))))
    return total - last if p % 2 == 0 else total + last


def delta(theta: SkewForm, check: bool = True) -> SkewForm:
    if check:
        w = skew_witness(theta)
        if w is not None:
            raise InvariantViolation("TO-skew", f"θ fails the exchange rule at Z=∂x{w[0]}, J={w[1]}")
    model = theta.model
    vals = {J: delta_value(theta, J) for J in combinations(model.leaf, theta.p + 1)}
    return SkewForm(model, theta.p + 1, vals)


def restrict_to_leaf(theta: SkewForm) -> Form:
    """``r(θ)``: the ``(p+k)``-form ``(X_1..X_{p+k}) ↦ θ(X_1..X_p)(X_{p+1}..X_{p+k})`` on the leaves.

    The result is a foliated form: a polynomial form in all coordinates whose
    terms only involve leaf differentials.
    """
    model = theta.model
    n, p, k = model.n, theta.p, model.k
    terms = {}
    for J in combinations(model.leaf, p + k):
        head, tail = J[:p], J[p:]
        val = evaluate(theta(head), [coord_field(n, i) for i in tail])
        if val != 0:
            terms[J] = val
    return Form(n, p + k, terms)


def leaf_d(form: Form, leaf: Sequence[int]) -> Form:
    """The foliated differential: ``d`` with derivatives and differentials along ``leaf`` only."""
    n = form.n
    terms: dict = {}
    for I, c in form.items():
        c = to_poly(c, n)
        for j in leaf:
            if j in I:
                continue
            dc = c.diff(j)
            if not dc:
                continue
            sign, key = sort_sign((j,) + I)
            v = dc if sign > 0 else -dc
            terms[key] = terms[key] + v if key in terms else v
    return Form(n, form.degree + 1, {k: v for k, v in terms.items() if v != 0})


def unrestrict(form: Form, model: LeafModel) -> SkewForm:
    """Inverse of ``r`` when the leaf is the whole chart and ``A_L = 0``."""
    if model.m != model.n or model.A:
        raise InvariantViolation("full leaf", "r is invertible only for O = M and A_L = 0")
    k = model.k
    p = form.degree - k
    vals = {}
    for J in combinations(model.leaf, p):
        f = form
        for i in J:
            f = interior(coord_field(model.n, i), f)
        vals[J] = f
    return SkewForm(model, p, vals)


# -- integrability -------------------------------------------------------


def cocycle_witness(model: LeafModel):
    """A pair ``(i, j)`` and the value ``L_i ε_j - i_j d ε_i`` when it is not in ``A_L``."""
    eps = dict(zip(model.leaf, model.eps))
    for i in model.leaf:
        for j in model.leaf:
            val = lie_derivative(model.field(i), eps[j]) - interior(model.field(j), d(eps[i]))
            if not model.in_A(val):
                return (i, j), val
    return None


def cocycle_check(model: LeafModel) -> bool:
    """``L_X ε(Y) - i_Y d ε(X) - ε([X,Y]) ∈ Γ(A_L)`` for all coordinate leaf fields."""
    return cocycle_witness(model) is None


@dataclass
class LeafCheck:
    cocycle: bool
    weakly_lagrangian: bool
    injective: bool
    failure: tuple | None = None

    @property
    def higher_dirac(self) -> bool:
        return self.cocycle and self.weakly_lagrangian

    @property
    def higher_poisson(self) -> bool:
        return self.higher_dirac and self.injective


def kernel_of_eps(model: LeafModel, point) -> list:
    """Leaf vectors ``v`` with ``ε(v) ∈ A_L`` at ``point``, as coefficient tuples over ``leaf``."""
    cols = [at(e, point).dense() for e in model.eps] + [at(a, point).dense() for a in model.A]
    rows = [[c[r] for c in cols] for r in range(len(cols[0]))] if cols else []
    null = linalg.nullspace(rows, len(cols))
    m = model.m
    vecs = linalg.rref([v[:m] for v in null], m) if m else []
    return vecs


def higher_dirac_leaf_check(model: LeafModel, samples=None) -> LeafCheck:
    """``ε(pr₂(L)°) = 0`` and ``ker ε = 0`` at each sample point, plus the cocycle condition."""
    samples = model.samples if samples is None else [tuple(Fraction(x) for x in p) for p in samples]
    n = model.n
    co = cocycle_check(model)
    wl, inj, failure = True, True, None
    for pt in samples:
        gens = [at(e, pt).dense() for e in model.eps] + [at(a, pt).dense() for a in model.A]
        P2 = Subspace(model.forms_ambient, gens)
        K = ann_in_V(P2)
        A_pt = model.A_at(pt)
        for v in K.rows:
            if any(v[i - 1] for i in range(1, n + 1) if i not in model.leaf):
                wl, failure = False, failure or ("pr₂(L)° ⊄ TO", pt)
                break
            img = Form(n, model.k, {})
            for idx, i in enumerate(model.leaf):
                if v[i - 1]:
                    img = img + at(model.eps[idx], pt) * v[i - 1]
            if img not in A_pt:
                wl, failure = False, failure or ("ε(pr₂(L)°) ≠ 0", pt)
                break
        if kernel_of_eps(model, pt):
            inj = False
    return LeafCheck(co, wl, inj, failure)


# -- pulling back to a single leaf --------------------------------------


def pullback_coefficients(form: Form, values: dict) -> Form:
    """Substitute constants for the transverse coordinates (restriction to one leaf)."""
    return form.map(lambda c: to_poly(c, form.n).substitute(values))


def leaf_values(model: LeafModel, point) -> dict:
    return {i: Fraction(point[i - 1]) for i in model.transverse()}


# -- random inputs -------------------------------------------------------


def random_poly(rng, n: int, degree: int = 2, terms: int = 3, variables=None) -> Poly:
    variables = list(variables or range(1, n + 1))
    out = Poly.const(n, 0)
    for _ in range(rng.randint(0, terms)):
        e = [0] * n
        for _ in range(rng.randint(0, degree)):
            if variables:
                e[rng.choice(variables) - 1] += 1
        out = out + Poly(n, {tuple(e): rng.choice((-2, -1, 1, 2, Fraction(1, 2)))})
    return out


def random_poly_form(rng, n: int, p: int, degree: int = 2, max_terms: int = 3, indices=None, variables=None) -> Form:
    idx = basis(n, p) if indices is None else list(indices)
    if not idx:
        return lift(Form.zero(n, p))
    chosen = rng.sample(idx, rng.randint(0, min(max_terms, len(idx))))
    return Form(n, p, {I: random_poly(rng, n, degree, variables=variables) for I in chosen})


def random_leaf_model(rng, n: int, k: int, m: int, constant_A: bool | None = None, **kw) -> LeafModel:
    """A random model whose ``A_L`` is ``L_X``-invariant and lies in ``Ann(TO)``.

    ``A_L`` is spanned by forms in the transverse differentials whose
    coefficients only depend on transverse coordinates.
    """
    leaf = tuple(sorted(rng.sample(range(1, n + 1), m)))
    trans = [i for i in range(1, n + 1) if i not in leaf]
    ann_idx = [I for I in basis(n, k) if all(i in trans for i in I)]
    if constant_A is None:
        constant_A = rng.random() < 0.5
    A = []
    if ann_idx:
        for I in rng.sample(ann_idx, rng.randint(0, len(ann_idx))):
            a = Form(n, k, {I: 1})
            if not constant_A and trans:
                # a transverse-dependent coefficient, nonvanishing on rational points
                t = rng.choice(trans)
                a = Form(n, k, {I: Poly.var(n, t) ** 2 + 1})
            A.append(a)
    model = LeafModel(n, k, leaf, A, [lift(Form.zero(n, k))] * m, **kw)
    eps = random_skew_form(rng, model, 1)
    return LeafModel(n, k, leaf, A, [eps((i,)) for i in leaf], samples=model.samples)


def random_skew_form(rng, model: LeafModel, p: int, degree: int = 2) -> SkewForm:
    """``θ(J) = i_{J_p}…i_{J_1} Ω + (Ann(TO)-valued part) + (A_L shift)``."""
    n, k = model.n, model.k
    Omega = random_poly_form(rng, n, p + k, degree, max_terms=3)
    # terms with at least p leaf indices survive the contractions
    along = [I for I in basis(n, p + k) if sum(i in model.leaf for i in I) >= p]
    Omega = Omega + random_poly_form(rng, n, p + k, degree, max_terms=3, indices=along)
    trans = model.transverse()
    ann_idx = [I for I in basis(n, k) if all(i in trans for i in I)]
    vals = {}
    for J in combinations(model.leaf, p):
        f = Omega
        for i in J:
            f = interior(coord_field(n, i), f)
        if ann_idx and rng.random() < 0.5:
            f = f + random_poly_form(rng, n, k, degree, max_terms=2, indices=ann_idx)
        for a in model.A:
            if rng.random() < 0.5:
                f = f + a * random_poly(rng, n, 1, 2)
        vals[J] = f
    return SkewForm(model, p, vals)


def field_theory_model(m: int, n_fib: int, **kw) -> LeafModel:
    """The field-theory structure as a leaf model: the leaves are the ``(y, p)`` fibres."""
    from .geometry import FieldTheory

    ft = FieldTheory(m, n_fib)
    leaf, eps, A = [], [], []
    for s, v in ft.generators():
        if v == 0:
            A.append(s)
            continue
        (i,), c = next(iter(v.items()))
        leaf.append(i)
        eps.append(s * (1 / Fraction(c)))
    order = sorted(range(len(leaf)), key=leaf.__getitem__)
    return LeafModel(ft.n, m, [leaf[j] for j in order], A, [eps[j] for j in order], **kw)
