import json

import pytest

from higherdirac import cli, fixtures
from higherdirac import serialize as ser
from higherdirac.dirac import classify, construct, decompose


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_classify_fixture(capsys):
    rc, out, _ = run(capsys, "classify", "hierarchy_r4")
    assert rc == 0
    assert "isotropic ✓" in out and "C3w ✓" in out and "C2w ✗" in out
    assert "witnesses:" in out


def test_classify_json_matches_library(capsys):
    path = fixtures.FIXTURE_DIR / "hierarchy_r6.json"
    rc, out, _ = run(capsys, "classify", "--json", str(path))
    assert rc == 0
    data = json.loads(out)
    L = ser.subspace_from_json(fixtures.load("hierarchy_r6")["input"]["subspace"])
    assert {f: data[f] for f in classify(L).flags()} == classify(L).flags()


def test_classify_empty(capsys):
    rc, out, _ = run(capsys, "classify", "--json", "empty")
    data = json.loads(out)
    assert rc == 0 and data["isotropic"] and data["standard"] and not data["C1"]


def test_inline_json_and_decompose_construct_round_trip(capsys):
    src = json.dumps(fixtures.load("graph_of_form")["input"]["subspace"])
    rc, out, _ = run(capsys, "decompose", "--json", src)
    assert rc == 0
    rc, out2, _ = run(capsys, "construct", "--json", out)
    assert rc == 0
    L = ser.subspace_from_json(json.loads(src))
    assert ser.subspace_from_json(json.loads(out2)) == L == construct(decompose(L))


def test_perp(capsys):
    rc, out, _ = run(capsys, "perp", "--json", "form_line")
    assert rc == 0
    P = ser.subspace_from_json(json.loads(out))
    # L = span{α} with L^⊥ = all 2-forms on R^4
    assert P.dim == 6 and all(g.vec == 0 for g in P.basis())


def test_bracket(capsys):
    rc, out, _ = run(capsys, "bracket", "nonintegrable_weak_a", "nonintegrable_weak_b")
    assert rc == 0 and out.strip() == "-dx3∧dx4"
    rc, out, _ = run(capsys, "bracket", "--json", "nonintegrable_weak_a", "nonintegrable_weak_b")
    assert json.loads(out)["form"] == {"3,4": -1}


def test_transform(capsys):
    rc, out, _ = run(capsys, "transform", "b_field_counterexample", "--B", '{"1,2,3,4": -1}')
    assert rc == 0 and "preserves weak lagrangian: no" in out


def test_restrict(capsys):
    rc, out, _ = run(capsys, "restrict", "--json", "restriction_source", "--W", "[[1,0,0,0,0],[0,1,0,0,0]]")
    assert rc == 0
    assert json.loads(out)["classification"]["C1"] is True


def test_involutive(capsys):
    rc, out, _ = run(capsys, "involutive", "nonintegrable_weak_frame")
    assert rc == 0 and out.startswith("no")
    rc, out, _ = run(capsys, "involutive", "--json", "--samples", "3", "closed_form_graph")
    assert json.loads(out) == {"involutive": True}


def test_delta_and_cocycle(capsys):
    rc, out, _ = run(capsys, "delta", "--json", "field_theory_leaf")
    assert rc == 0 and json.loads(out)["zero_mod_A"] is True
    rc, out, _ = run(capsys, "cocycle", "nonintegrable_weak_leaf")
    assert rc == 0 and "cocycle: no" in out and "dx3∧dx4" in out
    model = dict(fixtures.load("product_leafwise")["input"]["model"])
    model["theta"] = {"p": 0, "values": [{"on": [], "form": {"1,2,3": "x1"}}]}
    rc, out, _ = run(capsys, "delta", "--json", json.dumps(model))
    assert rc == 0 and json.loads(out)["p"] == 1


def test_verify_exit_code_tracks_failures(capsys, monkeypatch):
    report = fixtures.run_all()
    rc, out, _ = run(capsys, "verify")
    assert rc == (1 if report.failures else 0)
    assert out.splitlines()[-1].endswith("cases match")
    monkeypatch.setattr(fixtures, "run_all", lambda samples=None, seed=0: fixtures.Report([]))
    rc, out, _ = run(capsys, "verify", "--json")
    assert rc == 0 and json.loads(out)["failures"] == 0


def test_demo(capsys):
    rc, out, _ = run(capsys, "demo", "hierarchy_r4")
    assert rc == 0 and "verdict: matches" in out and "E = " in out
    rc, out, _ = run(capsys, "demo", "nonintegrable_weak_leaf")
    assert rc == 0 and "leaf directions" in out


@pytest.mark.parametrize("argv, needle", [
    (["decompose", "hierarchy_nonstandard_c2w"], "violates isotropic"),
    (["classify", "{not json"], "invalid JSON"),
    (["classify", "/no/such/file.json"], "cannot read"),
    (["demo", "no_such_case"], "no fixture"),
    (["classify", '{"n": 3}'], "invalid input"),
    (["bracket", "hierarchy_r4", "nonintegrable_weak_b"], "invalid input"),
])
def test_invalid_input_exits_1(capsys, argv, needle):
    rc, _, err = run(capsys, *argv)
    assert rc == 1
    assert needle in err


def test_usage_errors_exit_1(capsys):
    assert cli.main(["frobnicate"]) == 1
    assert cli.main([]) == 1
    capsys.readouterr()


def test_internal_error_exits_2(capsys, monkeypatch):
    def boom(L):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "classify", boom)
    rc, _, err = run(capsys, "classify", "hierarchy_r4")
    assert rc == 2 and "internal error" in err


def test_allow_non_isotropic(capsys):
    rc, out, _ = run(capsys, "decompose", "--allow-non-isotropic", "hierarchy_nonstandard_c2w")
    assert rc == 0 and out.startswith("E = ")
