import random

import pytest
from hypothesis import given, settings

from higherdirac.dirac import (
    FLAGS,
    IsotropicTriple,
    b_preserves_weak,
    b_transform,
    breaking_b_field,
    check_dim_constraint,
    classify,
    classify_c2s_structure,
    decompose,
    coordinate_complement,
    construct,

    extend_skew,
    extract_higher_poisson,
    form_of_graph,
    graph_of_form,
    graph_of_top_multivector,
    is_lagrangian,
    is_standard_dim,
    poisson_maps_on_all_forms,
    restrict,
    sharp_rank,
)
from higherdirac.errors import DegreeMismatch, InvariantViolation
from higherdirac.exterior import Form, Multivector, basis_form, basis_vector, contract, evaluate
from higherdirac.sampling import random_form, random_isotropic, random_subspace_of_V, random_triple, rng_from
from higherdirac.subspace import (
    Ambient,
    GradedElement,
    ann_in_forms,
    embed,
    is_isotropic,
    meet_forms,
    meet_vectors,
    perp,
    proj1,
    span_of,
    sum_,
)
from strategies import seeds

def _dims(rng, lo=2, hi=5):
    n = rng.randint(lo, hi)
    return n, rng.randint(1, n - 1)

def test_flag_names():
    L = graph_of_form(basis_form(3, 1, 2, 3))
    assert list(classify(L).flags()) == list(FLAGS)

def test_zero_subspace_flags():
    c = classify(span_of([], Ambient(3, 1)))
    assert c.flags() == {
        "isotropic": True, "C1": False, "C2w": False, "C2s": False, "C3w": False, "C3s": False,
        "standard": True, "higherPoisson": False, "graphOfForm": False, "intersectsFormsTrivially": True,
    }

def test_non_isotropic_flags_are_false_with_witness():
    n = 3
    L = span_of([GradedElement(basis_vector(n, 1), basis_form(n, 2, 3)),
                 GradedElement(basis_vector(n, 2), basis_form(n, 1, 3))])
    c = classify(L)
    assert not c.isotropic
    assert not any(c.flags()[f] for f in ("C1", "C2w", "C2s", "C3w", "C3s", "higherPoisson", "graphOfForm"))
    assert c.witnesses["C1"] is not None

@settings(max_examples=80)
@given(seeds)
def test_graphs_of_forms_are_lagrangian(seed):
    rng = rng_from(seed)
    n, k = _dims(rng)
    omega = random_form(rng, n, k + 1)
    L = graph_of_form(omega)
    c = classify(L)
    assert c.C1 and c.graphOfForm
    # L ∩ V is the kernel of X ↦ i_X ω
    assert c.higherPoisson == (meet_vectors(L).is_zero()) == (sharp_rank(omega) == n)
    assert form_of_graph(L) == omega

def test_graph_of_top_multivector():
    pi = Multivector(3, 3, {(1, 2, 3): 2})
    c = classify(graph_of_top_multivector(pi))
    assert c.C1 and c.higherPoisson
    with pytest.raises(DegreeMismatch):
        graph_of_top_multivector(Multivector(3, 2, {(1, 2): 1}))

@settings(max_examples=150)
@given(seeds)
def test_hierarchy(seed):
    rng = rng_from(seed)
    n, k = _dims(rng, 2, 6)
    c = classify(random_isotropic(rng, n, k, "standard"))
    assert not c.C2s or c.C1
    assert c.C1 == c.C3s
    assert not c.C1 or (c.C2w and c.C3w)

@settings(max_examples=60)
@given(seeds)
def test_nonstandard_flags(seed):
    rng = rng_from(seed)
    n = rng.randint(3, 6)
    k = rng.randint(2, n - 1)
    c = classify(random_isotropic(rng, n, k, "nonstandard"))
    assert not c.standard and c.C3s and not c.C3w and not c.C1

@settings(max_examples=100)
@given(seeds)
def test_lagrangian_is_self_perp(seed):
    rng = rng_from(seed)
    n, k = _dims(rng)
    L = random_isotropic(rng, n, k)
    assert classify(L).C1 == (L == perp(L)) == is_lagrangian(L)

def test_standard_dims():
    assert [d for d in range(5) if is_standard_dim(4, 2, d)] == [0, 1, 2, 4]
    assert not is_standard_dim(6, 3, 4)

def test_triple_violations():
    n, k = 3, 2
    V = Ambient(n, k, "V")
    F = Ambient(n, k, "forms")
    E = span_of([basis_vector(n, 1)], V)
    bad_A = IsotropicTriple(E, span_of([basis_form(n, 1, 2)], F), ((basis_vector(n, 1), Form.zero(n, k)),))
    assert [name for name, _ in bad_A.violations()] == ["A ⊆ Ann(E)"]
    E2 = span_of([basis_vector(n, 1), basis_vector(n, 2)], V)
    not_skew = IsotropicTriple(E2, span_of([], F),
                               ((basis_vector(n, 1), basis_form(n, 2, 3)), (basis_vector(n, 2), basis_form(n, 1, 3))))
    with pytest.raises(InvariantViolation) as err:
        construct(not_skew)
    assert err.value.invariant == "E-skew"
    short = IsotropicTriple(E2, span_of([], F), ((basis_vector(n, 1), Form.zero(n, k)),))
    assert "eps domain" in [name for name, _ in short.violations()]

def test_epsilon_is_linear():
    rng = random.Random(3)
    t = random_triple(rng, 5, 2, dim_E=2)
    (X, a), (Y, b) = t.eps
    assert t.epsilon(X * 2 - Y) == a * 2 - b
    outside = next(basis_vector(5, i) for i in range(1, 6) if not t.E.contains(basis_vector(5, i)))
    with pytest.raises(InvariantViolation):
        t.epsilon(outside)

@settings(max_examples=80)
@given(seeds)
def test_extend_skew(seed):
    rng = rng_from(seed)
    n, k = _dims(rng)
    t = random_triple(rng, n, k, dim_E=rng.randint(1, n))
    alpha = extend_skew(t.E, t.eps)
    for X, f in t.eps:
        assert contract(X, alpha) == f
    C = coordinate_complement(t.E).basis()
    if len(C) >= k + 1:
        assert evaluate(alpha, C[: k + 1]) == 0

@settings(max_examples=80)
@given(seeds)
def test_b_transform_group_law(seed):
    rng = rng_from(seed)
    n, k = _dims(rng)
    L = random_isotropic(rng, n, k)
    B1, B2 = random_form(rng, n, k + 1), random_form(rng, n, k + 1)
    T = b_transform(L, B1)
    assert is_isotropic(T) and T.dim == L.dim
    assert b_transform(T, B2) == b_transform(L, B1 + B2)
    assert b_transform(T, -B1) == L
    assert classify(T).C1 == classify(L).C1

@settings(max_examples=80)
@given(seeds)
def test_breaking_b_field(seed):
    rng = rng_from(seed)
    n, k = _dims(rng)
    L = random_isotropic(rng, n, k)
    c = classify(L)
    if not c.C2w:
        with pytest.raises(InvariantViolation):
            breaking_b_field(L)
        return
    B = breaking_b_field(L)
    if c.C1 or proj1(L).is_zero():
        assert B is None
        return
    assert B is not None
    assert not classify(b_transform(L, B)).C2w
    assert not b_preserves_weak(L, B)

def test_restrict_to_everything_is_identity():
    rng = random.Random(4)
    for _ in range(20):
        n, k = _dims(rng)
        L = random_isotropic(rng, n, k)
        W = [basis_vector(n, i) for i in range(1, n + 1)]
        assert restrict(L, W).rows == L.rows

def test_restrict_validates_W():
    L = graph_of_form(basis_form(3, 1, 2, 3))
    with pytest.raises(InvariantViolation):
        restrict(L, [basis_vector(3, 1), basis_vector(3, 1) * 2])
    with pytest.raises(InvariantViolation):
        restrict(L, [])

@settings(max_examples=60)
@given(seeds)
def test_restriction_stays_isotropic(seed):
    rng = rng_from(seed)
    n, k = _dims(rng, 3, 5)
    L = random_isotropic(rng, n, k)
    W = random_subspace_of_V(rng, n, k, rng.randint(1, n)).basis()
    assert is_isotropic(restrict(L, W))

def test_dim_constraint_needs_E():
    L = span_of([basis_form(3, 1, 2)], Ambient(3, 2))
    with pytest.raises(InvariantViolation):
        check_dim_constraint(L)
    assert check_dim_constraint(graph_of_form(basis_form(3, 1, 2, 3)))

def test_higher_poisson_extraction():
    rng = random.Random(5)
    seen = 0
    for _ in range(200):
        n, k = _dims(rng)
        L = random_isotropic(rng, n, k)
        c = classify(L)
        if not c.higherPoisson:
            continue
        seen += 1
        hp = extract_higher_poisson(L)
        assert hp.graph() == L
        # S° = 0 can fail for a proper S; the skew condition always holds
        assert all(v.startswith("S°") for v in hp.axiom_violations())
        assert hp.lagrangian_by_rank() == c.C1
    assert seen > 10
    with pytest.raises(InvariantViolation):
        extract_higher_poisson(span_of([basis_vector(3, 1)], Ambient(3, 1)))

def test_poisson_maps_are_skew():
    for n, k in [(3, 1), (3, 2), (4, 2)]:
        for sol in poisson_maps_on_all_forms(n, k):
            for I, v in sol.items():
                for J, w in sol.items():
                    assert contract(v, Form(n, k, {J: 1})) + contract(w, Form(n, k, {I: 1})) == 0
    # k = 1: skew bivectors
    assert len(poisson_maps_on_all_forms(4, 1)) == 6

def test_c2s_structures():
    n, k = 4, 2
    V = Ambient(n, k, "V")
    E = span_of([basis_vector(n, 1)], V)
    L = sum_(embed(E), embed(ann_in_forms(E)))
    assert classify_c2s_structure(L) == ("E-plus-Ann", None)
    omega = basis_form(n, 1, 2, 3)
    kind, w = classify_c2s_structure(graph_of_form(omega))
    assert kind == "decomposable-graph" and w == omega and sharp_rank(omega) == 3


def _kernel_of_eps(L):
    t = decompose(L)
    A = meet_forms(L)
    n, k = L.ambient.n, L.ambient.k
    # X ∈ E with ε(X) ∈ A: kernel of the map E → ∧^kV*/A
    from higherdirac import linalg

    cols = [f.dense() for _, f in t.eps] + [a.dense() for a in A.basis()]
    if not cols:
        return span_of([], Ambient(n, k, "V"))
    rows = [[c[i] for c in cols] for i in range(len(cols[0]))]
    out = []
    for c in linalg.nullspace(rows, len(cols)):
        X = Multivector.zero(n, 1)
        for ci, (v, _) in zip(c, t.eps):
            X = X + v * ci
        if X != 0:
            out.append(X)
    return span_of(out, Ambient(n, k, "V"))


@settings(max_examples=150)
@given(seeds)
def test_weak_lagrangian_as_a_kernel_condition(seed):
    from higherdirac.subspace import ann_in_V, proj2

    rng = rng_from(seed)
    n, k = _dims(rng, 2, 6)
    L = random_isotropic(rng, n, k)
    c = classify(L)
    assert c.C2w == (ann_in_V(proj2(L)) <= _kernel_of_eps(L))
    if c.C2w and meet_forms(L).is_zero():
        assert ann_in_V(proj2(L)) == meet_vectors(L)
        assert c.C1 == (proj1(L).dim == n)


def test_b_transform_can_break_weak_lagrangian():
    n = 4  # k = 3
    L = span_of([GradedElement(basis_vector(n, 1), basis_form(n, 2, 3, 4)),
                 GradedElement(basis_vector(n, 2), -basis_form(n, 1, 3, 4))])
    assert classify(L).C2w
    assert not classify(b_transform(L, -basis_form(n, 1, 2, 3, 4))).C2w


@settings(max_examples=80)
@given(seeds)
def test_b_transforms_of_form_subspaces_stay_weak(seed):
    rng = rng_from(seed)
    n, k = _dims(rng)
    F = Ambient(n, k, "forms")
    L = embed(span_of([random_form(rng, n, k) for _ in range(rng.randint(1, 3))], F))
    if not classify(L).C2w:
        return
    for _ in range(3):
        assert classify(b_transform(L, random_form(rng, n, k + 1))).C2w


def test_no_higher_poisson_maps_on_all_two_forms():
    for n in (4, 5, 6):
        assert poisson_maps_on_all_forms(n, 2) == []
    # the exceptional degrees
    assert poisson_maps_on_all_forms(4, 3) != []
    assert poisson_maps_on_all_forms(4, 1) != []
