"""Worked examples and counterexamples stored as JSON, with their expected verdicts.

Each file holds ``{"name", "citation", "kind", "input", "expected"}``.  The
``kind`` selects a runner below; every key present in ``expected`` is
checked and missing keys are ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .. import serialize as ser
from ..dirac import (
    b_preserves_weak,
    b_transform,
    breaking_b_field,
    classify,
    restrict,
)
from ..geometry import courant_dorfman, field_theory_fixture, involutive
from ..leafwise import cocycle_check, delta, higher_dirac_leaf_check, restrict_to_leaf
from ..subspace import Ambient, meet_forms, meet_vectors, proj1, span_of

FIXTURE_DIR = Path(__file__).parent


def names() -> list[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))


def load(name: str) -> dict:
    path = FIXTURE_DIR / f"{name}.json"
    if not path.exists():
        raise KeyError(f"no fixture named {name!r}")
    return json.loads(path.read_text())


def cases() -> list[dict]:
    return [load(n) for n in names()]


@dataclass
class CaseResult:
    name: str
    kind: str
    citation: str
    mismatches: list = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.error is None


@dataclass
class Report:
    results: list

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.ok]

    def table(self) -> str:
        w = max((len(r.name) for r in self.results), default=4)
        lines = [f"{'case':<{w}}  {'kind':<10}  result"]
        for r in self.results:
            status = "ok" if r.ok else "FAIL"
            detail = r.error or "; ".join(r.mismatches)
            lines.append(f"{r.name:<{w}}  {r.kind:<10}  {status}" + (f"  ({detail})" if detail else ""))
        lines.append(f"{len(self.results) - len(self.failures)}/{len(self.results)} cases match")
        return "\n".join(lines)


def _compare(out, key, got, want):
    if got != want:
        out.append(f"{key}: expected {want}, got {got}")


def _compare_flags(out, c, want: dict, prefix=""):
    for f, v in want.items():
        _compare(out, prefix + f, getattr(c, f), v)


def _vec_span(L, vecs):
    n = L.ambient.n
    amb = Ambient(n, L.ambient.k, "V", L.ambient.allow_edge)
    return span_of([ser.vector_from_json(v, n) for v in vecs], amb)


def _run_classify(case, out):
    L = ser.subspace_from_json(case["input"]["subspace"])
    exp = case["expected"]
    c = classify(L)
    _compare_flags(out, c, exp.get("flags", {}))
    if "meet_vectors" in exp:
        _compare(out, "L∩V", meet_vectors(L), _vec_span(L, exp["meet_vectors"]))
    if "dim_E" in exp:
        _compare(out, "dim E", proj1(L).dim, exp["dim_E"])
    if "dim_A" in exp:
        _compare(out, "dim A", meet_forms(L).dim, exp["dim_A"])
    return c


def _run_restrict(case, out):
    inp, exp = case["input"], case["expected"]
    L = ser.subspace_from_json(inp["subspace"])
    W = [ser.vector_from_json(v, L.ambient.n) for v in inp["W"]]
    LW = restrict(L, W)
    _compare_flags(out, classify(LW), exp.get("flags", {}))
    if "meet_vectors" in exp:
        _compare(out, "L_W∩W", meet_vectors(LW), _vec_span(LW, exp["meet_vectors"]))
    if "result" in exp:
        _compare(out, "L_W", LW, ser.subspace_from_json(exp["result"]))


def _run_b_field(case, out):
    inp, exp = case["input"], case["expected"]
    L = ser.subspace_from_json(inp["subspace"])
    n, k = L.ambient.n, L.ambient.k
    if "B" in inp:
        B = ser.form_from_json(inp["B"], n, k + 1)
    else:
        B = breaking_b_field(L)
        _compare(out, "breaking B exists", B is not None, exp.get("breaking", B is not None))
        if B is None:
            return
    if "preserves_weak" in exp:
        _compare(out, "preserves weak", b_preserves_weak(L, B), exp["preserves_weak"])
    T = b_transform(L, B)
    _compare_flags(out, classify(T), exp.get("result_flags", {}), "e^B L ")
    if "result" in exp:
        _compare(out, "e^B L", T, ser.subspace_from_json(exp["result"]))


def _run_bracket(case, out):
    inp, exp = case["input"], case["expected"]
    a = ser.section_from_json(inp["a"])
    b = ser.section_from_json(inp["b"])
    got = courant_dorfman(a, b)
    want = ser.section_from_json(exp["bracket"])
    _compare(out, "bracket", (got.vec, got.form), (want.vec, want.form))


def _run_section(case, out):
    ser.section_from_json(case["input"]["section"])


def _run_involutive(case, out, samples, seed):
    inp, exp = case["input"], case["expected"]
    F = ser.frame_from_json(inp["frame"], samples=samples, seed=seed)
    if "involutive" in exp:
        _compare(out, "involutive", bool(involutive(F)), exp["involutive"])
    for s in exp.get("strata", []):
        pt = [ser.rational(x) for x in s["point"]]
        S = F.at(pt)
        c = classify(S)
        if "dim_E" in s:
            _compare(out, f"dim E at {s['point']}", proj1(S).dim, s["dim_E"])
        if "dim_A" in s:
            _compare(out, f"dim A at {s['point']}", meet_forms(S).dim, s["dim_A"])
        _compare_flags(out, c, s.get("flags", {}), f"at {s['point']} ")


def _run_leaf(case, out, samples, seed):
    inp, exp = case["input"], case["expected"]
    M = ser.leaf_model_from_json(inp["model"], samples=samples, seed=seed)
    if "invariants" in exp:
        _compare(out, "model invariants hold", not M.invariant_violations(), exp["invariants"])
    chk = higher_dirac_leaf_check(M)
    for key in ("cocycle", "weakly_lagrangian", "injective", "higher_dirac", "higher_poisson"):
        if key in exp:
            _compare(out, key, getattr(chk, key), exp[key])
    if "delta_eps_zero" in exp:
        _compare(out, "δε ≡ 0", delta(M.epsilon()).is_zero_mod_A(), exp["delta_eps_zero"])
    if "restriction" in exp:
        r = restrict_to_leaf(M.epsilon())
        want = ser.form_from_json(exp["restriction"], M.n, M.k + 1, poly=True)
        _compare(out, "r(ε)", r, want)
    if exp.get("agrees_with_involutive"):
        _compare(out, "cocycle vs involutive", cocycle_check(M), bool(involutive(M.to_frame())))


def _run_poisson(case, out, samples, seed):
    inp, exp = case["input"], case["expected"]
    frame, pairs = field_theory_fixture(inp["m"], inp["n_fib"], samples=samples or 10, seed=seed)
    if "axioms" in exp:
        ok = all(not p.axiom_violations() for p in pairs)
        _compare(out, "higher Poisson axioms", ok, exp["axioms"])
    if "bivector" in exp:
        want = ser.form_from_json(exp["bivector"], frame.n, 2)
        for p in pairs:
            got = p.bivector()
            if got != want:
                _compare(out, "bivector", got, want)
                break
    if "cocycle" in exp:
        from ..leafwise import field_theory_model

        _compare(out, "cocycle", cocycle_check(field_theory_model(inp["m"], inp["n_fib"])), exp["cocycle"])
    if "graph_matches" in exp:
        ok = all(p.graph() == frame.at(pt) for p, pt in zip(pairs, frame.samples))
        _compare(out, "graph of (S, Λ) = frame", ok, exp["graph_matches"])


def run_case(case: dict, samples: int | None = None, seed=0) -> CaseResult:
    res = CaseResult(case["name"], case["kind"], case.get("citation", ""))
    out = res.mismatches
    kind = case["kind"]
    try:
        if kind == "classify":
            _run_classify(case, out)
        elif kind == "restrict":
            _run_restrict(case, out)
        elif kind == "b_field":
            _run_b_field(case, out)
        elif kind == "bracket":
            _run_bracket(case, out)
        elif kind == "section":
            _run_section(case, out)
        elif kind == "involutive":
            _run_involutive(case, out, samples, seed)
        elif kind == "leaf":
            _run_leaf(case, out, samples, seed)
        elif kind == "poisson":
            _run_poisson(case, out, samples, seed)
        else:
            res.error = f"unknown fixture kind {kind!r}"
    except Exception as exc:  # reported per case, never aborts the run
        res.error = f"{type(exc).__name__}: {exc}"
    return res


def run_all(samples: int | None = None, seed=0) -> Report:
    return Report([run_case(c, samples, seed) for c in cases()])
