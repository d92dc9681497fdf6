"""Isotropic subspaces of ``V ⊕ ∧^k V*``: triples, classification, transforms.

An isotropic subspace is encoded by its projection ``E = pr₁(L)``, its form
part ``A = L ∩ ∧^k V*`` and a map ``ε`` sending a basis of ``E`` to k-forms,
read modulo ``A``; ``L = {X + α : X ∈ E, α ∈ ε(X) + A}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from . import linalg
from .errors import AmbientMismatch, DegreeMismatch, InvariantViolation
from .exterior import Form, Multivector, basis, contract, contract_multi, evaluate, wedge
from .subspace import (
    Ambient,
    GradedElement,
    Subspace,
    ann_in_V,
    ann_in_forms,
    coords,
    element,
    embed,
    forms_first_rows,
    intersect,
    isotropy_violation,
    meet_forms,
    meet_vectors,
    perp,
    proj1,
    proj2,
    span_of,
    sum_,
    whole,
    witness,
)

FLAGS = (
    "isotropic",
    "C1",
    "C2w",
    "C2s",
    "C3w",
    "C3s",
    "standard",
    "higherPoisson",
    "graphOfForm",
    "intersectsFormsTrivially",
)


# -- triples -------------------------------------------------------------


@dataclass(frozen=True)
class IsotropicTriple:
    """``(E, A, ε)`` with ``ε`` given on a basis of ``E`` as ``(X, form)`` pairs."""

    E: Subspace
    A: Subspace
    eps: tuple = ()

    @property
    def n(self):
        return self.E.ambient.n

    @property
    def k(self):
        return self.E.ambient.k

    def epsilon(self, X: Multivector) -> Form:
        """A representative of ``ε(X)`` for any ``X ∈ E``."""
        cols = [v.dense() for v, _ in self.eps]
        c = linalg.solve(cols, X.dense())
        if c is None:
            raise InvariantViolation("X ∈ E", f"{X} is not in E")
        out = Form.zero(self.n, self.k)
        for ci, (_, f) in zip(c, self.eps):
            if ci:
                out = out + f * ci
        return out

    def violations(self) -> list[tuple[str, str]]:
        """Every broken invariant as ``(name, message)``; empty when valid."""
        out = []
        E, A = self.E, self.A
        if E.ambient.part != "V" or A.ambient.part != "forms":
            return [("ambients", "E must live in V and A in the k-forms")]
        if (E.ambient.n, E.ambient.k) != (A.ambient.n, A.ambient.k):
            return [("ambients", "E and A have different (n, k)")]
        n, k = self.n, self.k
        for v, f in self.eps:
            if v.n != n or f.n != n or v.degree != 1 or f.degree != k:
                return [("eps shape", "ε must send vectors of V to k-forms")]
        vecs = [v for v, _ in self.eps]
        if len(vecs) != E.dim or span_of(vecs, E.ambient) != E:
            out.append(("eps domain", "ε must be given on a basis of E"))
        if not A <= ann_in_forms(E):
            out.append(("A ⊆ Ann(E)", "A contains a form that does not vanish on E"))
        bad = skew_violation(self.eps)
        if bad is not None:
            out.append(("E-skew", f"i_Y ε(X) + i_X ε(Y) ≠ 0 for X={bad[0]}, Y={bad[1]}"))
        return out

    def check(self):
        bad = self.violations()
        if bad:
            name, msg = bad[0]
            raise InvariantViolation(name, msg)
        return self


def skew_violation(eps: Sequence):
    """First basis pair ``(X, Y)`` with ``i_Y ε(X) ≠ -i_X ε(Y)``, or ``None``."""
    for a in range(len(eps)):
        Xa, fa = eps[a]
        if fa.degree == 0:
            return None
        for b in range(a, len(eps)):
            Xb, fb = eps[b]
            if contract(Xb, fa) + contract(Xa, fb) != 0:
                return Xa, Xb
    return None


def construct(t: IsotropicTriple) -> Subspace:
    """``L(E, A, ε)``."""
    t.check()
    amb = Ambient(t.n, t.k, "graded", t.E.ambient.allow_edge)
    gens = [GradedElement(v, f) for v, f in t.eps]
    rows = [coords(amb, g) for g in gens]
    rows += [coords(amb, a) for a in t.A.basis()]
    return Subspace(amb, rows)


def decompose(L: Subspace, require_isotropic: bool = True) -> IsotropicTriple:
    """Read ``(E, A, ε)`` off the echelon form of ``L``.

    The echelon rows with a vector pivot give a basis of ``E``; their form
    parts vanish on the pivot columns of ``A``, which fixes the representative
    of each class of ``ε`` mod ``A``.
    """
    if require_isotropic:
        bad = isotropy_violation(L)
        if bad is not None:
            raise InvariantViolation("isotropic", f"⟨{bad[0]}, {bad[1]}⟩ ≠ 0")
    n = L.ambient.n
    eps = []
    for r in L.rows:
        if any(r[:n]):
            g = element(L.ambient, r)
            eps.append((g.vec, g.form))
    return IsotropicTriple(proj1(L), meet_forms(L), tuple(eps))


# -- classification ------------------------------------------------------


@dataclass
class Classification:
    isotropic: bool
    C1: bool
    C2w: bool
    C2s: bool
    C3w: bool
    C3s: bool
    standard: bool
    higherPoisson: bool
    graphOfForm: bool
    intersectsFormsTrivially: bool
    witnesses: dict = field(default_factory=dict)

    def flags(self) -> dict:
        return {f: getattr(self, f) for f in FLAGS}

    def __str__(self):
        bits = []
        for f in FLAGS:
            v = getattr(self, f)
            s = f"{f} {'✓' if v else '✗'}"
            w = self.witnesses.get(f)
            if not v and w is not None:
                s += f" (witness: {w})"
            bits.append(s)
        return "\n".join(bits)


def _as_graded(L: Subspace, x):
    if x is None or isinstance(x, GradedElement):
        return x
    n, k = L.ambient.n, L.ambient.k
    if isinstance(x, Multivector):
        return GradedElement(x, Form.zero(n, k))
    return GradedElement(Multivector.zero(n, 1), x)


def classify(L: Subspace) -> Classification:
    """Every flag computed from its defining subspace equation."""
    if L.ambient.part != "graded":
        raise AmbientMismatch("classify expects a subspace of V ⊕ ∧^kV*")
    amb = L.ambient
    W = {}
    Lp = perp(L)

    iso_w = witness(L, intersect(L, Lp))
    iso = iso_w is None
    if not iso:
        W["isotropic"] = iso_w

    E = proj1(L)
    A = meet_forms(L)
    LV = meet_vectors(L)
    P2 = proj2(L)

    def check(name, a, b):
        w = witness(a, b)
        if not iso:
            W[name] = iso_w
            return False
        if w is not None:
            W[name] = _as_graded(L, w)
            return False
        return True

    c1 = check("C1", L, Lp)
    c2w = check("C2w", LV, ann_in_V(P2))
    c2s = check("C2s", ann_in_forms(LV), P2)
    c3w = check("C3w", E, ann_in_V(A))
    c3s = check("C3s", ann_in_forms(E), A)
    std = check("standard", ann_in_V(ann_in_forms(E)), E)

    hp = c2w and LV.is_zero()
    if not hp:
        if not c2w:
            W["higherPoisson"] = W["C2w"]
        else:
            W["higherPoisson"] = _as_graded(L, LV.basis()[0])

    graph = iso and E.dim == amb.n and A.is_zero()
    if not graph:
        if not iso:
            W["graphOfForm"] = iso_w
        elif not A.is_zero():
            W["graphOfForm"] = _as_graded(L, A.basis()[0])
        else:
            W["graphOfForm"] = _as_graded(L, witness(E, whole(E.ambient)))

    triv = A.is_zero()
    if not triv:
        W["intersectsFormsTrivially"] = _as_graded(L, A.basis()[0])

    return Classification(iso, c1, c2w, c2s, c3w, c3s, std, hp, graph, triv, W)


def is_weakly_lagrangian(L: Subspace) -> bool:
    if isotropy_violation(L) is not None:
        return False
    return meet_vectors(L) == ann_in_V(proj2(L))


def is_lagrangian(L: Subspace) -> bool:
    return L == perp(L)


def is_standard_dim(n: int, k: int, dim_E: int) -> bool:
    """Standardness read from ``dim E`` alone."""
    return dim_E == n or dim_E <= n - k


# -- graphs --------------------------------------------------------------


def _graded_ambient(n, k):
    return Ambient(n, k, "graded", allow_edge=k >= n)


def graph_of_form(omega: Form, k: int | None = None) -> Subspace:
    """``gr(ω) = {X + i_X ω : X ∈ V}`` for a ``(k+1)``-form ``ω``."""
    if not isinstance(omega, Form):
        raise DegreeMismatch("graph_of_form expects a Form")
    if k is None:
        k = omega.degree - 1
    if omega.degree != k + 1:
        raise DegreeMismatch(f"expected a {k + 1}-form, got degree {omega.degree}")
    n = omega.n
    amb = Ambient(n, k, "graded")
    gens = []
    for i in range(1, n + 1):
        e = Multivector(n, 1, {(i,): 1})
        gens.append(GradedElement(e, contract(e, omega)))
    return span_of(gens, amb)


def graph_of_top_multivector(pi: Multivector, k: int | None = None) -> Subspace:
    """``gr(π) = {i_α π + α : α ∈ ∧^{n-1} V*}`` for ``π ∈ ∧^n V``."""
    n = pi.n
    if pi.degree != n:
        raise DegreeMismatch(f"expected a top-degree multivector, got degree {pi.degree}")
    if k is None:
        k = n - 1
    if k != n - 1:
        raise DegreeMismatch(f"graph of a top multivector needs k = n-1 = {n - 1}, got {k}")
    amb = Ambient(n, k, "graded")
    gens = []
    for I in basis(n, k):
        a = Form(n, k, {I: 1})
        gens.append(GradedElement(contract_multi(a, pi), a))
    return span_of(gens, amb)


# -- higher Poisson pairs ------------------------------------------------


@dataclass(frozen=True)
class HigherPoissonPair:
    """``(S, Λ)``: a subspace of k-forms and a linear map ``Λ: S → V``.

    ``Lambda`` lists ``(α, Λα)`` on a basis of ``S``.
    """

    S: Subspace
    Lambda: tuple

    @property
    def n(self):
        return self.S.ambient.n

    @property
    def k(self):
        return self.S.ambient.k

    def apply(self, alpha: Form) -> Multivector:
        cols = [a.dense() for a, _ in self.Lambda]
        c = linalg.solve(cols, alpha.dense())
        if c is None:
            raise InvariantViolation("α ∈ S", f"{alpha} is not in S")
        out = Multivector.zero(self.n, 1)
        for ci, (_, v) in zip(c, self.Lambda):
            if ci:
                out = out + v * ci
        return out

    def image(self) -> Subspace:
        return span_of([v for _, v in self.Lambda], self.S.ambient.with_part("V"))

    def rank(self) -> int:
        return self.image().dim

    def kernel(self) -> Subspace:
        cols = [v.dense() for _, v in self.Lambda]
        # kernel of the coefficient map, pushed back into S
        rows = [[col[i] for col in cols] for i in range(self.n)]
        null = linalg.nullspace(rows, len(cols))
        forms = []
        for c in null:
            f = Form.zero(self.n, self.k)
            for ci, (a, _) in zip(c, self.Lambda):
                if ci:
                    f = f + a * ci
            forms.append(f)
        return span_of(forms, self.S.ambient)

    def graph(self) -> Subspace:
        amb = self.S.ambient.with_part("graded")
        return span_of([GradedElement(v, a) for a, v in self.Lambda], amb)

    def axiom_violations(self) -> list[str]:
        """Broken conditions among ``S° = 0`` and ``i_{Λα}β = -i_{Λβ}α``."""
        out = []
        if not ann_in_V(self.S).is_zero():
            out.append("S° ≠ {0}")
        pairs = self.Lambda
        for a in range(len(pairs)):
            for b in range(a, len(pairs)):
                (al, va), (be, vb) = pairs[a], pairs[b]
                if contract(va, be) + contract(vb, al) != 0:
                    out.append(f"i_(Λα)β ≠ -i_(Λβ)α for α={al}, β={be}")
                    return out
        return out

    def lagrangian_by_rank(self) -> bool:
        """``(rank Λ = n or rank Λ ≤ n-k)`` and ``Ann(Im Λ) = ker Λ``."""
        r = self.rank()
        std = r == self.n or r <= self.n - self.k
        return std and ann_in_forms(self.image()) == self.kernel()

    def bivector(self) -> Multivector:
        """For ``k = 1`` and ``S = V*``: the ``Π`` with ``Λ(α) = i_α Π``."""
        if self.k != 1 or self.S.dim != self.n:
            raise DegreeMismatch("a bivector exists only for k=1 and S = V*")
        n = self.n
        terms = {}
        for a in range(1, n + 1):
            img = self.apply(Form(n, 1, {(a,): 1}))
            for b in range(a + 1, n + 1):
                c = img[(b,)]
                if c:
                    terms[(a, b)] = c
        return Multivector(n, 2, terms)


def extract_higher_poisson(L: Subspace) -> HigherPoissonPair:
    """The pair ``(S, Λ)`` with ``gr(Λ) = L`` for weakly lagrangian ``L`` with ``L ∩ V = 0``."""
    if not meet_vectors(L).is_zero():
        raise InvariantViolation("L ∩ V = {0}", "L meets V nontrivially")
    if not is_weakly_lagrangian(L):
        raise InvariantViolation("weakly lagrangian", "L is not weakly lagrangian")
    n, k = L.ambient.n, L.ambient.k
    pairs = []
    for f, v in forms_first_rows(L):
        pairs.append((Form.from_dense(n, k, f), Multivector.from_dense(n, 1, v)))
    return HigherPoissonPair(proj2(L), tuple(pairs))


def poisson_maps_on_all_forms(n: int, k: int) -> list:
    """Every ``Λ: ∧^kV* → V`` with ``i_{Λα}β = -i_{Λβ}α``, as a basis of the solution space.

    Unknowns are the entries ``Λ(e^I)_j`` (row-major in ``I``); each basis
    element of the result is a dict ``{I: Multivector}``.
    """
    idx = basis(n, k)
    m = len(idx)
    lower = {J: j for j, J in enumerate(basis(n, k - 1))}
    nunk = m * n

    def var(a, j):
        return a * n + j

    eqs = []
    for a in range(m):
        for b in range(a, m):
            rows = {}
            # i_{Λ e^{I_b}} e^{I_a} + i_{Λ e^{I_a}} e^{I_b}
            for src, tgt in ((b, a), (a, b)):
                T = idx[tgt]
                for s, i in enumerate(T):
                    J = lower[T[:s] + T[s + 1:]]
                    row = rows.setdefault(J, [0] * nunk)
                    row[var(src, i - 1)] += -1 if s % 2 else 1
            eqs.extend(r for r in rows.values() if any(r))
    sols = linalg.nullspace(eqs, nunk)
    out = []
    for s in sols:
        out.append({idx[a]: Multivector.from_dense(n, 1, s[a * n:(a + 1) * n]) for a in range(m)})
    return out


# -- skew extension ------------------------------------------------------


def coordinate_complement(E: Subspace) -> Subspace:
    """The span of the standard basis vectors at the non-pivot columns of ``E``."""
    n = E.ambient.n
    piv = set(E.pivots())
    rows = []
    for j in range(n):
        if j not in piv:
            rows.append(tuple(Fraction(int(i == j)) for i in range(n)))
    return Subspace(E.ambient, rows)


def extend_skew(E: Subspace, theta: Sequence, C: Subspace | None = None) -> Form:
    """The form ``α`` with ``i_X α = θ(X)`` on ``E`` that vanishes on tuples from ``C``.

    ``theta`` lists ``(X, θ(X))`` on a basis of ``E``; the degree of ``α`` is
    one more than the degree of the ``θ(X)``.
    """
    if E.ambient.part != "V":
        raise AmbientMismatch("E must be a subspace of V")
    n = E.ambient.n
    theta = list(theta)
    vecs = [v for v, _ in theta]
    if len(vecs) != E.dim or span_of(vecs, E.ambient) != E:
        raise InvariantViolation("θ domain", "θ must be given on a basis of E")
    if not theta:
        raise InvariantViolation("θ domain", "E = {0}: the degree of the extension is undetermined")
    p = theta[0][1].degree + 1
    if any(f.degree != p - 1 or f.n != n for _, f in theta):
        raise DegreeMismatch("all values of θ must share one degree")
    if p > n:
        raise DegreeMismatch(f"no nonzero {p}-forms in dimension {n}")
    bad = skew_violation(theta)
    if bad is not None:
        raise InvariantViolation("E-skew", f"θ is not E-skew at X={bad[0]}, Y={bad[1]}")
    if C is None:
        C = coordinate_complement(E)
    if C.ambient.n != n or C.ambient.part != "V":
        raise AmbientMismatch("C must be a subspace of the same V")
    if C.dim + E.dim != n or not intersect(C, E).is_zero():
        raise InvariantViolation("complement", "C ⊕ E ≠ V")

    idx = basis(n, p)
    unit = [Form(n, p, {I: 1}) for I in idx]
    eqs_cols = []  # each unknown's contribution, as one long column
    for u in unit:
        col = []
        for v, _ in theta:
            col.extend(contract(v, u).dense())
        for Ys in combinations(C.basis(), p):
            col.append(evaluate(u, Ys))
        eqs_cols.append(col)
    target = []
    for _, f in theta:
        target.extend(f.dense())
    target.extend(0 for _ in combinations(range(C.dim), p))
    sol = linalg.solve(eqs_cols, target)
    if sol is None:
        raise InvariantViolation("E-skew", "no extension exists")
    return Form.from_dense(n, p, sol)


# -- B-field transforms --------------------------------------------------


def b_transform(L: Subspace, B: Form) -> Subspace:
    """``e^B L = {X + α + i_X B : X + α ∈ L}``."""
    n, k = L.ambient.n, L.ambient.k
    if L.ambient.part != "graded":
        raise AmbientMismatch("b_transform expects a subspace of V ⊕ ∧^kV*")
    if not isinstance(B, Form) or B.degree != k + 1 or B.n != n:
        raise DegreeMismatch(f"B must be a {k + 1}-form on an {n}-dimensional space")
    gens = [GradedElement(g.vec, g.form + contract(g.vec, B)) for g in L.basis()]
    return span_of(gens, L.ambient)


def b_transform_element(u: GradedElement, B: Form) -> GradedElement:
    return GradedElement(u.vec, u.form + contract(u.vec, B))


def b_preserves_weak(L: Subspace, B: Form) -> bool:
    """``L ∩ gr(-B) = L^⊥ ∩ gr(-B)``."""
    g = graph_of_form(-B, L.ambient.k)
    if g.ambient != L.ambient:
        g = Subspace(L.ambient, g.rows)
    return intersect(L, g) == intersect(perp(L), g)


def breaking_b_field(L: Subspace):
    """A ``B`` with ``e^{B} L`` not weakly lagrangian, or ``None`` when none exists.

    ``L`` must be weakly lagrangian; ``None`` is returned exactly when ``L``
    is lagrangian or ``E = {0}``.
    """
    if not is_weakly_lagrangian(L):
        raise InvariantViolation("weakly lagrangian", "L is not weakly lagrangian")
    n, k = L.ambient.n, L.ambient.k
    t = decompose(L)
    if t.E.is_zero() or is_lagrangian(L):
        return None
    if not is_standard_dim(n, k, t.E.dim):
        # extend -ε to a (k+1)-form; then e^B L = E
        return extend_skew(t.E, [(v, -f) for v, f in t.eps])
    # a form in L^⊥ but not in L, added to an element Y + β of L with Y ≠ 0
    Lp_forms = meet_forms(perp(L))
    alpha = witness(Lp_forms, t.A)
    Y, beta = t.eps[0]
    gamma = beta + alpha
    # a covector ξ with ξ(Y) = 1
    j = next(i for i in range(1, n + 1) if Y[(i,)])
    xi = Form(n, 1, {(j,): 1 / Fraction(Y[(j,)])})
    B = wedge(xi, gamma)  # i_Y B = γ since i_Y γ = 0
    return -B


# -- restriction ---------------------------------------------------------


def pullback(alpha: Form, W_basis: Sequence[Multivector]) -> Form:
    """``i* α`` in coordinates given by the ordered basis of ``W``."""
    d = len(W_basis)
    p = alpha.degree
    terms = {}
    for I in basis(d, p):
        val = evaluate(alpha, [W_basis[i - 1] for i in I])
        if val:
            terms[I] = val
    return Form(d, p, terms)


def restrict(L: Subspace, W) -> Subspace:
    """``L_W = {X + i*α : X ∈ W, X + α ∈ L}`` in ``W ⊕ ∧^k W*``.

    ``W`` is an ordered list of independent vectors, or a ``Subspace`` of
    ``V`` whose echelon basis is then used.
    """
    bad = isotropy_violation(L)
    if bad is not None:
        raise InvariantViolation("isotropic", f"⟨{bad[0]}, {bad[1]}⟩ ≠ 0")
    n, k = L.ambient.n, L.ambient.k
    if isinstance(W, Subspace):
        if W.ambient.part != "V" or W.ambient.n != n:
            raise AmbientMismatch("W must be a subspace of V")
        W_basis = W.basis()
    else:
        W_basis = list(W)
    Wsub = span_of(W_basis, Ambient(n, k, "V", L.ambient.allow_edge))
    if Wsub.dim != len(W_basis):
        raise InvariantViolation("W basis", "the vectors spanning W are dependent")
    d = len(W_basis)
    if d == 0:
        raise InvariantViolation("W basis", "W must be nonzero")
    # elements of L whose vector part lies in W
    big = sum_(embed(Wsub), embed(whole(L.ambient.with_part("forms"))))
    part = intersect(L, big)
    cols = [w.dense() for w in W_basis]
    amb = Ambient(d, k, "graded", allow_edge=k >= d)
    gens = []
    for g in part.basis():
        c = linalg.solve(cols, g.vec.dense())
        X = Multivector.from_dense(d, 1, c)
        gens.append(GradedElement(X, pullback(g.form, W_basis)))
    return span_of(gens, amb)


# -- dimension bound and the C2s dichotomy -------------------------------


def check_dim_constraint(L: Subspace) -> bool:
    """``dim pr₂(L) ≤ dim E + C(n-1, k)`` for isotropic ``L`` with ``E ≠ 0``."""
    bad = isotropy_violation(L)
    if bad is not None:
        raise InvariantViolation("isotropic", f"⟨{bad[0]}, {bad[1]}⟩ ≠ 0")
    E = proj1(L)
    if E.is_zero():
        raise InvariantViolation("E ≠ {0}", "the bound is vacuous when E = {0}")
    n, k = L.ambient.n, L.ambient.k
    return proj2(L).dim <= E.dim + comb(n - 1, k)


def form_of_graph(L: Subspace) -> Form:
    """The ``(k+1)``-form ``ω`` with ``L = gr(ω)``."""
    t = decompose(L)
    if t.E.dim != L.ambient.n or not t.A.is_zero():
        raise InvariantViolation("graph of a form", "need E = V and L ∩ ∧^kV* = {0}")
    return extend_skew(t.E, t.eps)


def sharp_rank(omega: Form) -> int:
    """``rank(ω^♭ : X ↦ i_X ω)``."""
    n = omega.n
    rows = [contract(Multivector(n, 1, {(i,): 1}), omega).dense() for i in range(1, n + 1)]
    return linalg.rank(rows, comb(n, omega.degree - 1))


def classify_c2s_structure(L: Subspace):
    """Which description fits a standard isotropic ``L`` satisfying C2s.

    Returns ``("E-plus-Ann", None)``, ``("decomposable-graph", ω)`` or
    ``("neither", None)``.
    """
    c = classify(L)
    if not (c.standard and c.C2s):
        raise InvariantViolation("standard and C2s", "L must be standard isotropic with C2s")
    n, k = L.ambient.n, L.ambient.k
    E = proj1(L)
    if L == sum_(embed(E), embed(ann_in_forms(E))):
        return "E-plus-Ann", None
    if E.dim == n and meet_forms(L).is_zero():
        omega = form_of_graph(L)
        if sharp_rank(omega) == k + 1:
            return "decomposable-graph", omega
    return "neither", None
