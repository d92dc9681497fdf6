"""Command-line front end.

Inputs are JSON files or inline JSON strings.  A fixture file may be given
wherever its ``input`` holds the object a verb expects.  Exit status is 0 on
success, 1 on invalid input and 2 on internal errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fixtures
from . import serialize as ser
from .dirac import (
    b_preserves_weak,
    b_transform,
    classify,
    construct,
    decompose,
    restrict,
)
from .errors import HigherDiracError, InvariantViolation
from .geometry import courant_dorfman, involutive
from .leafwise import SkewForm, cocycle_witness, delta, higher_dirac_leaf_check
from .subspace import perp


class InputError(HigherDiracError):
    pass


def _read(arg: str):
    text = arg if arg.lstrip().startswith(("{", "[")) else None
    if text is None:
        path = Path(arg)
        if not path.exists() and fixtures.FIXTURE_DIR.joinpath(arg + ".json").exists():
            path = fixtures.FIXTURE_DIR / (arg + ".json")
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {arg}: {exc}") from None


def _unwrap(obj, key):
    if isinstance(obj, dict) and "kind" in obj and "input" in obj:
        inp = obj["input"]
        if key in inp:
            return inp[key]
        raise InputError(f"fixture {obj.get('name')} has no {key!r} input")
    return obj


def _emit(args, human: str, data):
    if args.json:
        print(ser.dumps(data))
    else:
        print(human)


def _subspace_text(L) -> str:
    gens = L.basis()
    if not gens:
        return "{0}"
    return "span{" + ", ".join(str(g) for g in gens) + "}"


def cmd_classify(args):
    L = ser.subspace_from_json(_unwrap(_read(args.input), "subspace"))
    c = classify(L)
    line = " ".join(f"{f} {'✓' if v else '✗'}" for f, v in c.flags().items())
    wits = [f"{f}: {w}" for f, w in c.witnesses.items() if w is not None]
    human = line + ("\nwitnesses:\n  " + "\n  ".join(wits) if wits else "")
    _emit(args, human, ser.classification_to_json(c))


def cmd_perp(args):
    L = ser.subspace_from_json(_unwrap(_read(args.input), "subspace"))
    P = perp(L)
    _emit(args, _subspace_text(P), ser.subspace_to_json(P))


def cmd_decompose(args):
    L = ser.subspace_from_json(_unwrap(_read(args.input), "subspace"))
    t = decompose(L, require_isotropic=not args.allow_non_isotropic)
    lines = [f"E = {_subspace_text(t.E)}", f"A = {_subspace_text(t.A)}"]
    lines += [f"ε({X}) = {f} + A" for X, f in t.eps]
    _emit(args, "\n".join(lines), ser.triple_to_json(t))


def cmd_construct(args):
    t = ser.triple_from_json(_read(args.input))
    L = construct(t)
    _emit(args, _subspace_text(L), ser.subspace_to_json(L))


def cmd_transform(args):
    L = ser.subspace_from_json(_unwrap(_read(args.input), "subspace"))
    n, k = L.ambient.n, L.ambient.k
    B = ser.form_from_json(_read(args.B), n, k + 1)
    T = b_transform(L, B)
    keep = b_preserves_weak(L, B)
    human = f"{_subspace_text(T)}\npreserves weak lagrangian: {'yes' if keep else 'no'}"
    _emit(args, human, {"result": ser.subspace_to_json(T), "preserves_weak": keep})


def cmd_restrict(args):
    L = ser.subspace_from_json(_unwrap(_read(args.input), "subspace"))
    W = [ser.vector_from_json(v, L.ambient.n) for v in _read(args.W)]
    LW = restrict(L, W)
    c = classify(LW)
    line = " ".join(f"{f} {'✓' if v else '✗'}" for f, v in c.flags().items())
    _emit(args, f"{_subspace_text(LW)}\n{line}",
          {"result": ser.subspace_to_json(LW), "classification": ser.classification_to_json(c)})


def _section(arg, key):
    return ser.section_from_json(_unwrap(_read(arg), key))


def cmd_bracket(args):
    a = _section(args.a, "section")
    b = _section(args.b, "section")
    br = courant_dorfman(a, b)
    _emit(args, br.to_str(), ser.section_to_json(br))


def cmd_involutive(args):
    F = ser.frame_from_json(_unwrap(_read(args.input), "frame"), samples=args.samples, seed=args.seed)
    v = involutive(F)
    data = {"involutive": v.ok}
    if not v.ok:
        data.update(point=[ser.rational_out(x) for x in v.point], pair=list(v.pair),
                    bracket=ser.section_to_json(v.bracket))
    _emit(args, str(v), data)


def _model(args):
    return ser.leaf_model_from_json(_unwrap(_read(args.input), "model"), samples=args.samples, seed=args.seed)


def cmd_delta(args):
    M = _model(args)
    obj = _unwrap(_read(args.input), "model")
    if "theta" in obj:
        th = obj["theta"]
        vals = {tuple(v["on"]): ser.form_from_json(v["form"], M.n, M.k, poly=True) for v in th.get("values", [])}
        theta = SkewForm(M, int(th["p"]), vals)
    else:
        theta = M.epsilon()
    dt = delta(theta)
    zero = dt.is_zero_mod_A()
    human = f"δθ = {dt}\nδθ ≡ 0 mod A_L: {'yes' if zero else 'no'}"
    data = {
        "p": dt.p,
        "values": [{"on": list(J), "form": ser.alternating_to_json(f)} for J, f in dt.values.items()],
        "zero_mod_A": zero,
    }
    _emit(args, human, data)


def cmd_cocycle(args):
    M = _model(args)
    w = cocycle_witness(M)
    chk = higher_dirac_leaf_check(M)
    data = {
        "cocycle": w is None,
        "weakly_lagrangian": chk.weakly_lagrangian,
        "higher_dirac": chk.higher_dirac,
        "higher_poisson": chk.higher_poisson,
    }
    if w is None:
        human = "cocycle: yes"
    else:
        (i, j), val = w
        human = f"cocycle: no (pair ∂x{i}, ∂x{j}: {val.to_str('dx')} ∉ A_L)"
        data["pair"] = [i, j]
        data["value"] = ser.alternating_to_json(val)
    human += (f"\nweakly lagrangian at samples: {'yes' if chk.weakly_lagrangian else 'no'}"
              f"\nhigher Poisson: {'yes' if chk.higher_poisson else 'no'}")
    _emit(args, human, data)


def cmd_verify(args):
    report = fixtures.run_all(samples=args.samples, seed=args.seed)
    data = {
        "cases": [
            {"name": r.name, "kind": r.kind, "ok": r.ok, "detail": r.error or "; ".join(r.mismatches)}
            for r in report.results
        ],
        "failures": len(report.failures),
    }
    _emit(args, report.table(), data)
    return 0 if not report.failures else 1


def cmd_demo(args):
    case = fixtures.load(args.name)
    print(f"{case['name']}  [{case['kind']}]")
    print(f"source: {case.get('citation', '')}")
    if case.get("note"):
        print(f"note: {case['note']}")
    inp = case["input"]
    if "subspace" in inp:
        L = ser.subspace_from_json(inp["subspace"])
        print(f"L = {_subspace_text(L)}  (n={L.ambient.n}, k={L.ambient.k})")
        try:
            t = decompose(L, require_isotropic=False)
            print(f"  E = {_subspace_text(t.E)}")
            print(f"  A = {_subspace_text(t.A)}")
            for X, f in t.eps:
                print(f"  ε({X}) = {f} + A")
        except HigherDiracError as exc:
            print(f"  (no triple: {exc})")
        print(f"  L^⊥ = {_subspace_text(perp(L))}")
    if "frame" in inp:
        F = ser.frame_from_json(inp["frame"])
        print("frame generators:")
        for g in F.generators:
            print(f"  {g.to_str()}")
    if "model" in inp:
        M = ser.leaf_model_from_json(inp["model"])
        print(f"leaf directions: {', '.join(f'∂x{i}' for i in M.leaf)}")
        print("A_L: " + (", ".join(a.to_str("dx") for a in M.A) or "0"))
        for i, e in zip(M.leaf, M.eps):
            print(f"  ε(∂x{i}) = {e.to_str('dx')}")
    r = fixtures.run_case(case, samples=args.samples, seed=args.seed)
    print("expected: " + json.dumps(case["expected"], ensure_ascii=False)[:400])
    print("verdict: " + ("matches" if r.ok else "differs: " + (r.error or "; ".join(r.mismatches))))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--samples", type=int, default=None, help="number of sample points for frames")
    common.add_argument("--seed", type=int, default=0, help="seed for sample points")

    p = argparse.ArgumentParser(prog="higherdirac", description="Isotropic subspaces of V ⊕ ∧^kV* and their integrability.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help, *inputs):
        s = sub.add_parser(name, parents=[common], help=help)
        for i in inputs:
            s.add_argument(i)
        s.set_defaults(fn=fn)
        return s

    verb("classify", cmd_classify, "flags of a subspace with witnesses", "input")
    verb("perp", cmd_perp, "orthogonal complement under the pairing", "input")
    s = verb("decompose", cmd_decompose, "the triple (E, A, ε) of an isotropic subspace", "input")
    s.add_argument("--allow-non-isotropic", action="store_true")
    verb("construct", cmd_construct, "the subspace of a triple", "input")
    s = verb("transform", cmd_transform, "B-field transform", "input")
    s.add_argument("--B", required=True, help="the (k+1)-form as JSON or a file")
    s = verb("restrict", cmd_restrict, "restriction to a subspace W", "input")
    s.add_argument("--W", required=True, help="list of vectors spanning W, as JSON or a file")
    verb("bracket", cmd_bracket, "Dorfman bracket of two sections", "a", "b")
    verb("involutive", cmd_involutive, "involutivity of a frame at sample points", "input")
    verb("delta", cmd_delta, "the leafwise differential of ε (or of a given θ)", "input")
    verb("cocycle", cmd_cocycle, "integrability of a leaf model", "input")
    verb("verify", cmd_verify, "run the fixture corpus")
    verb("demo", cmd_demo, "walk through a named fixture", "name")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 1
    try:
        rc = args.fn(args)
        return rc or 0
    except InvariantViolation as exc:
        print(f"error: invalid input (violates {exc.invariant}): {exc}", file=sys.stderr)
        return 1
    except (HigherDiracError, KeyError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
