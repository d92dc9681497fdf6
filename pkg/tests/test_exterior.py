import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from higherdirac.errors import AmbientMismatch, DegreeMismatch
from higherdirac.exterior import (
    Form,
    Multivector,
    basis_form,
    basis_vector,
    contract,
    contract_multi,
    evaluate,
    sort_sign,
    vector,
    wedge,
)
from strategies import forms, vectors


def test_sort_sign():
    assert sort_sign((2, 1, 3)) == (-1, (1, 2, 3))
    assert sort_sign((3, 1, 2)) == (1, (1, 2, 3))
    assert sort_sign((1, 1)) == (0, ())


def test_terms_are_normalised():
    f = Form(3, 2, {(2, 1): 1, (1, 2): 3, (1, 1): 7})
    assert dict(f.items()) == {(1, 2): 2}
    assert Form(3, 2, {(1, 2): 1, (2, 1): 1}) == 0


def test_degree_and_range_checks():
    with pytest.raises(DegreeMismatch):
        Form(3, 2, {(1,): 1})
    with pytest.raises(ValueError):
        Form(3, 1, {(4,): 1})
    with pytest.raises(AmbientMismatch):
        wedge(basis_form(3, 1), basis_form(4, 2))
    with pytest.raises(TypeError):
        contract(basis_form(3, 1), basis_form(3, 1, 2))


def test_printing():
    assert str(basis_form(3, 1, 2)) == "e^{1,2}"
    assert str(basis_vector(3, 2)) == "e_{2}"
    assert (basis_form(3, 1, 2) * -1 + basis_form(3, 2, 3) * Fraction(1, 2)).to_str("dx") == "-dx1∧dx2 + 1/2*dx2∧dx3"


def test_contract_sign_convention():
    # i_{e_s} moves past s-1 factors
    e123 = basis_form(3, 1, 2, 3)
    assert contract(basis_vector(3, 1), e123) == basis_form(3, 2, 3)
    assert contract(basis_vector(3, 2), e123) == -basis_form(3, 1, 3)
    assert contract(basis_vector(3, 3), e123) == basis_form(3, 1, 2)


def _det_oracle(alpha, vecs):
    """Σ_I α_I det(v_j^{I_i}) computed with sympy."""
    total = sympy.Integer(0)
    for I, c in alpha.items():
        M = sympy.Matrix([[sympy.Rational(v[(i,)].numerator, v[(i,)].denominator) for v in vecs] for i in I])
        total += sympy.Rational(c.numerator, c.denominator) * M.det()
    return Fraction(int(total.p), int(total.q))


@given(st.data())
def test_evaluate_matches_determinants(data):
    n = data.draw(st.integers(1, 5))
    p = data.draw(st.integers(1, n))
    alpha = data.draw(forms(n, p))
    vecs = [data.draw(vectors(n)) for _ in range(p)]
    assert evaluate(alpha, vecs) == _det_oracle(alpha, vecs)


@given(st.data())
def test_wedge_graded_commutative_and_associative(data):
    n = data.draw(st.integers(1, 5))
    p, q, r = (data.draw(st.integers(0, n)) for _ in range(3))
    a, b, c = data.draw(forms(n, p)), data.draw(forms(n, q)), data.draw(forms(n, r))
    assert wedge(a, b) == wedge(b, a) * (-1) ** (p * q)
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(st.data())
def test_contraction_is_an_antiderivation(data):
    n = data.draw(st.integers(1, 5))
    p = data.draw(st.integers(1, n))
    q = data.draw(st.integers(0, n))
    a, b = data.draw(forms(n, p)), data.draw(forms(n, q))
    X = data.draw(vectors(n))
    lhs = contract(X, wedge(a, b))
    rhs = wedge(contract(X, a), b)
    if q:
        rhs = rhs + wedge(a, contract(X, b)) * (-1) ** p
    assert lhs == rhs
    if p >= 2:
        assert contract(X, contract(X, a)) == 0


@given(st.data())
def test_contract_multi_is_iterated_contraction(data):
    n = data.draw(st.integers(2, 5))
    q = data.draw(st.integers(1, n))
    p = data.draw(st.integers(q, n))
    a = data.draw(forms(n, p))
    I = data.draw(st.sampled_from(list(itertools.combinations(range(1, n + 1), q))))
    P = Multivector(n, q, {I: 1})
    cur = a
    for j in reversed(I):
        cur = contract(basis_vector(n, j), cur)
    assert contract_multi(P, a) == cur


def test_dense_round_trip():
    f = Form(4, 2, {(1, 3): 2, (2, 4): -1})
    assert Form.from_dense(4, 2, f.dense()) == f
    assert vector(3, [1, 0, 2]) == Multivector(3, 1, {(1,): 1, (3,): 2})
    with pytest.raises(DegreeMismatch):
        Form(3, 1, {(1,): 2}).scalar()


def test_basis_cardinality():
    from math import comb

    from higherdirac.exterior import basis

    for n in range(0, 7):
        for p in range(0, n + 1):
            assert len(basis(n, p)) == comb(n, p)


def test_thousand_random_wedges_and_contractions():
    from higherdirac.sampling import random_form, random_vector, rng_from

    rng = rng_from(1000)
    for _ in range(1000):
        n = rng.randint(1, 6)
        p, q, r = (rng.randint(0, n) for _ in range(3))
        a, b, c = random_form(rng, n, p, 3), random_form(rng, n, q, 3), random_form(rng, n, r, 3)
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
        X = random_vector(rng, n, sparse=True)
        if p:
            rhs = wedge(contract(X, a), b)
            if q:
                rhs = rhs + wedge(a, contract(X, b)) * (-1) ** p
            assert contract(X, wedge(a, b)) == rhs
            if p >= 2:
                assert contract(X, contract(X, a)) == 0
