"""Seeded random generators for forms, subspaces and isotropic subspaces.

Everything takes an explicit :class:`random.Random` so corpora are
reproducible from a seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb

from .dirac import IsotropicTriple
from .exterior import Form, Multivector, basis, contract
from .subspace import Ambient, GradedElement, Subspace, ann_in_forms, coords, span_of

SMALL = (-2, -1, -1, 1, 1, 2)


def rng_from(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_scalar(rng, allow_fraction=True) -> Fraction:
    if allow_fraction and rng.random() < 0.15:
        return Fraction(rng.choice(SMALL), rng.choice((2, 3)))
    return Fraction(rng.choice(SMALL))


def random_form(rng, n: int, p: int, max_terms: int | None = None) -> Form:
    """A sparse random p-form; the number of terms is uniform in ``0..max_terms``."""
    idx = basis(n, p)
    if not idx:
        return Form.zero(n, p)
    top = len(idx) if max_terms is None else min(max_terms, len(idx))
    chosen = rng.sample(idx, rng.randint(0, top))
    return Form(n, p, {I: random_scalar(rng) for I in chosen})


def random_vector(rng, n: int, sparse: bool = False) -> Multivector:
    if sparse:
        return Multivector(n, 1, {(rng.randint(1, n),): random_scalar(rng)})
    return Multivector.from_dense(n, 1, [Fraction(rng.randint(-2, 2)) for _ in range(n)])


def random_subspace_of_V(rng, n: int, k: int, dim: int, allow_edge=False) -> Subspace:
    """A random ``dim``-dimensional subspace of ``V``; half the time a coordinate subspace."""
    amb = Ambient(n, k, "V", allow_edge)
    if rng.random() < 0.5:
        picks = rng.sample(range(1, n + 1), dim)
        return span_of([Multivector(n, 1, {(i,): 1}) for i in picks], amb)
    while True:
        vecs = [random_vector(rng, n) for _ in range(dim)]
        E = span_of(vecs, amb)
        if E.dim == dim:
            return E


def random_span(rng, sub: Subspace, dim: int) -> Subspace:
    """A random ``dim``-dimensional subspace of ``sub``."""
    gens = sub.basis()
    dim = min(dim, len(gens))
    if rng.random() < 0.5:
        return span_of(rng.sample(gens, dim), sub.ambient)
    while True:
        picks = []
        for _ in range(dim):
            acc = None
            for g in gens:
                c = rng.choice((0, 0, 1, -1, 2))
                if c:
                    acc = g * c if acc is None else acc + g * c
            if acc is not None:
                picks.append(acc)
        S = span_of(picks, sub.ambient)
        if S.dim == dim:
            return S


def standard_dims(n: int, k: int) -> list[int]:
    return [d for d in range(n + 1) if d == n or d <= n - k]


def nonstandard_dims(n: int, k: int) -> list[int]:
    return [d for d in range(n - k + 1, n)]


def pick_dim(rng, n: int, k: int, kind: str | None) -> int:
    """Choose ``dim E``, biased toward the boundary values ``n-k`` and ``n-k+1``."""
    if kind == "standard":
        pool = standard_dims(n, k)
    elif kind == "nonstandard":
        pool = nonstandard_dims(n, k)
        if not pool:
            raise ValueError(f"no non-standard isotropic subspaces for n={n}, k={k}")
    else:
        pool = list(range(n + 1))
    weights = [3 if d in (n - k, n - k + 1) else 1 for d in pool]
    return rng.choices(pool, weights)[0]


def random_triple(rng, n: int, k: int, kind: str | None = None, dim_E: int | None = None):
    """A random ``(E, A, ε)`` with ``A ⊆ Ann(E)`` and ``ε(X) = i_X B``.

    Every E-skew ``ε`` is of this form for some ``(k+1)``-form ``B``, so the
    generator reaches all isotropic subspaces.
    """
    if dim_E is None:
        dim_E = pick_dim(rng, n, k, kind)
    E = random_subspace_of_V(rng, n, k, dim_E)
    ann = ann_in_forms(E)
    r = rng.random()
    if r < 0.3:
        A = ann
    elif r < 0.5:
        A = Subspace(ann.ambient)
    else:
        A = random_span(rng, ann, rng.randint(0, ann.dim))
    B = random_form(rng, n, k + 1, max_terms=rng.choice((1, 2, 3, comb(n, k + 1))))
    eps = tuple((X, contract(X, B)) for X in E.basis())
    return IsotropicTriple(E, A, eps)


def build(t: IsotropicTriple) -> Subspace:
    """``L(E, A, ε)`` without re-validating the triple."""
    amb = Ambient(t.n, t.k, "graded")
    rows = [coords(amb, GradedElement(v, f)) for v, f in t.eps]
    rows += [coords(amb, a) for a in t.A.basis()]
    return Subspace(amb, rows)


def random_isotropic(rng, n: int, k: int, kind: str | None = None, dim_E: int | None = None) -> Subspace:
    return build(random_triple(rng, n, k, kind, dim_E))


def random_graded_subspace(rng, n: int, k: int, dim: int | None = None) -> Subspace:
    """An arbitrary (usually non-isotropic) subspace of ``V ⊕ ∧^kV*``."""
    amb = Ambient(n, k, "graded")
    if dim is None:
        dim = rng.randint(0, min(amb.ncols, n + 3))
    gens = []
    for _ in range(dim):
        X = random_vector(rng, n, sparse=rng.random() < 0.5) if rng.random() < 0.7 else Multivector.zero(n, 1)
        gens.append(GradedElement(X, random_form(rng, n, k, max_terms=2)))
    return span_of(gens, amb)


def random_graded_element(rng, n: int, k: int) -> GradedElement:
    return GradedElement(random_vector(rng, n), random_form(rng, n, k))
