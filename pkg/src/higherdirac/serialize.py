"""JSON encodings shared by the fixtures and the command line.

* Form: ``{"1,2": "3/2", "1,3": "-1"}``; a multivector carries ``"part": "V"``.
  Coefficients are rationals (``"p/q"`` strings or bare integers) or, for
  polynomial objects, polynomial strings such as ``"x1^2*x4 - 3/2*x2"``.
  The empty index string ``""`` stands for a degree-0 term.
* Subspace: ``{"n", "k", "ambient", "generators": [{"vec": [...], "form": {...}}]}``.
* Triple: ``{"n", "k", "E": [[...]], "A": [{...}], "eps": [{"on": [...], "form": {...}}]}``.
* PolySection: ``{"n", "k", "vec": ["x1", "0", ...], "form": {...}}``.
* Frame: ``{"n", "k", "generators": [PolySection...], "samples": [[...]]}``.
* LeafModel: ``{"leaf": [...] or "m", "frame": Frame of A_L generators, "eps": [{...}]}``.
* Classification: one boolean per flag plus ``"witnesses"``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .dirac import FLAGS, Classification, IsotropicTriple
from .errors import HigherDiracError
from .exterior import Form, Multivector
from .geometry import Frame, PolySection, lift
from .poly import Poly
from .subspace import Ambient, GradedElement, Subspace, span_of


class SchemaError(HigherDiracError):
    """Malformed JSON input."""


def rational(x) -> Fraction:
    if isinstance(x, bool):
        raise SchemaError(f"expected a rational, got {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"bad rational {x!r}") from None
    raise SchemaError(f"expected a rational, got {x!r}")


def rational_out(x: Fraction):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _coef_out(c):
    if isinstance(c, Poly):
        return rational_out(c.constant()) if c.is_constant() else str(c)
    return rational_out(c)


def _coef_in(x, n, poly):
    if poly:
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return Poly.const(n, x)
        if isinstance(x, str):
            return Poly.parse(x, n)
        raise SchemaError(f"expected a polynomial string, got {x!r}")
    return rational(x)


def _key(I) -> str:
    return ",".join(str(i) for i in I)


def _parse_key(s: str, n: int) -> tuple:
    if not isinstance(s, str):
        raise SchemaError(f"bad index key {s!r}")
    if not s.strip():
        return ()
    try:
        idx = tuple(int(t) for t in s.split(","))
    except ValueError:
        raise SchemaError(f"bad index key {s!r}") from None
    if any(not 1 <= i <= n for i in idx):
        raise SchemaError(f"index out of range in {s!r}")
    return idx


def alternating_to_json(a) -> dict:
    out = {_key(I): _coef_out(c) for I, c in a.items()}
    if isinstance(a, Multivector):
        out["part"] = "V"
    return out


def form_from_json(obj: dict, n: int, degree: int | None = None, poly: bool = False):
    """A Form, or a Multivector when ``"part": "V"`` is present."""
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an object of coefficients, got {obj!r}")
    obj = dict(obj)
    cls = Multivector if obj.pop("part", None) == "V" else Form
    terms = {}
    for key, v in obj.items():
        I = _parse_key(key, n)
        if degree is not None and len(I) != degree:
            raise SchemaError(f"term {key!r} does not have degree {degree}")
        if len(set(I)) != len(I):
            raise SchemaError(f"repeated index in {key!r}")
        terms[I] = _coef_in(v, n, poly)
    if degree is None:
        degs = {len(I) for I in terms}
        if len(degs) > 1:
            raise SchemaError("mixed degrees in one form")
        degree = degs.pop() if degs else 0
    out = cls(n, degree, terms)
    return lift(out) if poly else out


def vector_to_json(v: Multivector) -> list:
    return [_coef_out(c) for c in v.dense()]


def vector_from_json(xs, n: int, poly: bool = False) -> Multivector:
    if not isinstance(xs, list) or len(xs) != n:
        raise SchemaError(f"expected a list of {n} components, got {xs!r}")
    comps = {(i + 1,): _coef_in(x, n, poly) for i, x in enumerate(xs)}
    v = Multivector(n, 1, comps)
    return lift(v) if poly else v


def element_to_json(e: GradedElement) -> dict:
    return {"vec": vector_to_json(e.vec), "form": alternating_to_json(e.form)}


def element_from_json(obj, n: int, k: int, poly: bool = False) -> GradedElement:
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an element object, got {obj!r}")
    vec = vector_from_json(obj.get("vec", [0] * n), n, poly)
    form = form_from_json(obj.get("form", {}), n, k, poly)
    return (PolySection if poly else GradedElement)(vec, form)


def _nk(obj):
    try:
        n, k = int(obj["n"]), int(obj["k"])
    except (KeyError, TypeError, ValueError):
        raise SchemaError("missing or invalid 'n' / 'k'") from None
    if n < 1 or k < 0:
        raise SchemaError(f"invalid dimensions n={n}, k={k}")
    return n, k


def subspace_to_json(L: Subspace) -> dict:
    amb = L.ambient
    return {
        "n": amb.n,
        "k": amb.k,
        "ambient": amb.part,
        "generators": [_basis_json(b) for b in L.basis()],
    }


def _basis_json(b):
    if isinstance(b, GradedElement):
        return element_to_json(b)
    if isinstance(b, Multivector):
        return {"vec": vector_to_json(b)}
    return {"form": alternating_to_json(b)}


def subspace_from_json(obj) -> Subspace:
    if not isinstance(obj, dict):
        raise SchemaError("a subspace must be a JSON object")
    n, k = _nk(obj)
    part = obj.get("ambient", "graded")
    if part not in ("graded", "V", "forms"):
        raise SchemaError(f"unknown ambient {part!r}")
    amb = Ambient(n, k, part, allow_edge=bool(obj.get("allow_edge", False)))
    gens = obj.get("generators", [])
    if not isinstance(gens, list):
        raise SchemaError("'generators' must be a list")
    elems = []
    for g in gens:
        e = element_from_json(g, n, k)
        if part == "V":
            if e.form != 0:
                raise SchemaError("a subspace of V cannot have form parts")
            elems.append(e.vec)
        elif part == "forms":
            if e.vec != 0:
                raise SchemaError("a subspace of forms cannot have vector parts")
            elems.append(e.form)
        else:
            elems.append(e)
    return span_of(elems, amb)


def triple_to_json(t: IsotropicTriple) -> dict:
    return {
        "n": t.n,
        "k": t.k,
        "E": [vector_to_json(v) for v in t.E.basis()],
        "A": [alternating_to_json(a) for a in t.A.basis()],
        "eps": [{"on": vector_to_json(X), "form": alternating_to_json(f)} for X, f in t.eps],
    }


def triple_from_json(obj) -> IsotropicTriple:
    n, k = _nk(obj)
    E = span_of([vector_from_json(v, n) for v in obj.get("E", [])], Ambient(n, k, "V"))
    A = span_of([form_from_json(a, n, k) for a in obj.get("A", [])], Ambient(n, k, "forms"))
    eps = []
    for item in obj.get("eps", []):
        if not isinstance(item, dict) or "on" not in item:
            raise SchemaError("each eps entry needs 'on' and 'form'")
        eps.append((vector_from_json(item["on"], n), form_from_json(item.get("form", {}), n, k)))
    return IsotropicTriple(E, A, tuple(eps))


def classification_to_json(c: Classification) -> dict:
    out = {f: getattr(c, f) for f in FLAGS}
    out["witnesses"] = {f: element_to_json(w) for f, w in c.witnesses.items() if w is not None}
    return out


def section_to_json(s: GradedElement) -> dict:
    return {"n": s.n, "k": s.k, **element_to_json(s)}


def section_from_json(obj) -> PolySection:
    n, k = _nk(obj)
    return element_from_json(obj, n, k, poly=True)


def frame_to_json(F: Frame) -> dict:
    return {
        "n": F.n,
        "k": F.k,
        "generators": [element_to_json(g) for g in F.generators],
        "samples": [[rational_out(x) for x in p] for p in F.samples],
    }


def frame_from_json(obj, samples: int | None = None, seed=0) -> Frame:
    n, k = _nk(obj)
    gens = [element_from_json(g, n, k, poly=True) for g in obj.get("generators", [])]
    pts = obj.get("samples")
    if pts is not None:
        pts = [[rational(x) for x in p] for p in pts]
        for p in pts:
            if len(p) != n:
                raise SchemaError(f"sample point {p} does not have {n} coordinates")
    return Frame(gens, pts, count=samples or 25, seed=seed, n=n, k=k)


def leaf_model_to_json(M) -> dict:
    zero = Multivector.zero(M.n, 1)
    frame = {
        "n": M.n,
        "k": M.k,
        "generators": [element_to_json(GradedElement(lift(zero), a)) for a in M.A],
        "samples": [[rational_out(x) for x in p] for p in M.samples],
    }
    return {"leaf": list(M.leaf), "frame": frame, "eps": [alternating_to_json(e) for e in M.eps]}


def leaf_model_from_json(obj, samples: int | None = None, seed=0):
    from .leafwise import LeafModel

    if not isinstance(obj, dict) or "frame" not in obj:
        raise SchemaError("a leaf model needs 'frame', 'eps' and 'leaf' or 'm'")
    fr = obj["frame"]
    n, k = _nk(fr)
    if "leaf" in obj:
        leaf = [int(i) for i in obj["leaf"]]
    elif "m" in obj:
        leaf = list(range(1, int(obj["m"]) + 1))
    else:
        raise SchemaError("a leaf model needs 'leaf' or 'm'")
    A = []
    for g in fr.get("generators", []):
        e = element_from_json(g, n, k, poly=True)
        if e.vec != 0:
            raise SchemaError("A_L generators are pure forms")
        A.append(e.form)
    eps = [form_from_json(e, n, k, poly=True) for e in obj.get("eps", [])]
    pts = fr.get("samples")
    if pts is not None:
        pts = [[rational(x) for x in p] for p in pts]
    return LeafModel(n, k, leaf, A, eps, samples=pts, count=samples or 10, seed=seed)


def dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2)
