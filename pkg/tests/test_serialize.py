import json
import random

import pytest
from hypothesis import given, settings

from higherdirac import serialize as ser
from higherdirac.dirac import classify, decompose
from higherdirac.exterior import Form, Multivector
from higherdirac.geometry import Frame, PolySection, lift, poly_form, poly_vector
from higherdirac.leafwise import random_leaf_model, random_poly_form
from higherdirac.sampling import random_form, random_graded_subspace, random_isotropic, rng_from
from strategies import seeds


def through_json(obj):
    return json.loads(ser.dumps(obj))


def test_rationals():
    assert ser.rational("3/4") == ser.rational("6/8") == ser.rational(" 3/4 ")
    assert ser.rational_out(ser.rational("4/2")) == 2
    assert ser.rational_out(ser.rational("-1/3")) == "-1/3"
    for bad in (True, "x", None, "1/0"):
        with pytest.raises(ser.SchemaError):
            ser.rational(bad)


@given(seeds)
def test_form_round_trip(seed):
    rng = rng_from(seed)
    n = rng.randint(1, 5)
    p = rng.randint(0, n)
    f = random_form(rng, n, p)
    assert ser.form_from_json(through_json(ser.alternating_to_json(f)), n, p) == f
    v = Multivector(n, 1, {(1,): 3})
    assert ser.form_from_json(ser.alternating_to_json(v), n) == v


@settings(max_examples=40)
@given(seeds)
def test_poly_form_round_trip(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    p = rng.randint(0, n)
    f = random_poly_form(rng, n, p, 3, 3)
    assert ser.form_from_json(through_json(ser.alternating_to_json(f)), n, p, poly=True) == lift(f)


@given(seeds)
def test_subspace_and_triple_round_trip(seed):
    rng = rng_from(seed)
    n = rng.randint(2, 5)
    k = rng.randint(1, n - 1)
    L = random_graded_subspace(rng, n, k)
    assert ser.subspace_from_json(through_json(ser.subspace_to_json(L))) == L
    I = random_isotropic(rng, n, k)
    t = decompose(I)
    t2 = ser.triple_from_json(through_json(ser.triple_to_json(t)))
    assert (t2.E, t2.A, t2.eps) == (t.E, t.A, t.eps)


def test_classification_json():
    L = random_isotropic(rng_from(2), 4, 2)
    c = classify(L)
    out = through_json(ser.classification_to_json(c))
    assert {f: out[f] for f in c.flags()} == c.flags()
    assert set(out["witnesses"]) == {f for f, w in c.witnesses.items() if w is not None}


def test_section_and_frame_round_trip():
    n = 3
    s = PolySection(poly_vector(n, ["x1", 0, "1/2*x3^2"]), poly_form(n, 1, {(2,): "x1*x2 - 1"}))
    back = ser.section_from_json(through_json(ser.section_to_json(s)))
    assert (back.vec, back.form) == (s.vec, s.form)
    F = Frame([s], count=3, seed=2)
    G = ser.frame_from_json(through_json(ser.frame_to_json(F)))
    assert G.samples == F.samples and G.generators[0].form == s.form


def test_leaf_model_round_trip():
    rng = random.Random(6)
    for _ in range(10):
        M = random_leaf_model(rng, 4, 2, 2, count=3)
        N = ser.leaf_model_from_json(through_json(ser.leaf_model_to_json(M)))
        assert (N.leaf, N.A, N.eps, N.samples) == (M.leaf, M.A, M.eps, M.samples)


@pytest.mark.parametrize("obj, n, degree", [
    ({"1,2": 1, "1": 2}, 3, None),
    ({"1,4": 1}, 3, 2),
    ({"1,1": 1}, 3, 2),
    ({"a": 1}, 3, None),
    ([1, 2], 3, None),
    ({"1": 2}, 3, 2),
])
def test_bad_forms(obj, n, degree):
    with pytest.raises(ser.SchemaError):
        ser.form_from_json(obj, n, degree)


def test_bad_subspaces():
    with pytest.raises(ser.SchemaError):
        ser.subspace_from_json({"k": 1})
    with pytest.raises(ser.SchemaError):
        ser.subspace_from_json({"n": 3, "k": 1, "ambient": "V", "generators": [{"form": {"1": 1}}]})
    with pytest.raises(ser.SchemaError):
        ser.subspace_from_json({"n": 3, "k": 1, "generators": [{"vec": [1, 2]}]})
    with pytest.raises(ser.SchemaError):
        ser.leaf_model_from_json({"frame": {"n": 2, "k": 1}})
    with pytest.raises(ser.SchemaError):
        ser.frame_from_json({"n": 2, "k": 1, "samples": [[1]]})


def test_zero_form_key():
    f = ser.form_from_json({"": 3}, 2)
    assert f == Form(2, 0, {(): 3})
