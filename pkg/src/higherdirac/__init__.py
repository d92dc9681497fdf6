"""Exact computations with isotropic subspaces of V ⊕ ∧^kV* and their integrability."""

from .errors import AmbientMismatch, DegreeMismatch, HigherDiracError, InvariantViolation, RankDrop
from .exterior import Form, Multivector, basis_form, basis_vector, contract, contract_multi, evaluate, vector, wedge
from .subspace import Ambient, GradedElement, Subspace, pairing, perp, span_of
from .dirac import (
    Classification,
    HigherPoissonPair,
    IsotropicTriple,
    b_preserves_weak,
    b_transform,
    classify,
    construct,
    decompose,
    extract_higher_poisson,
    graph_of_form,
    graph_of_top_multivector,
    restrict,
)
from .poly import Poly
from .geometry import Frame, PolySection, courant_dorfman, d, involutive, lie_bracket, lie_derivative
from .leafwise import LeafModel, SkewForm, cocycle_check, delta, higher_dirac_leaf_check, restrict_to_leaf

__all__ = [
    "AmbientMismatch", "DegreeMismatch", "HigherDiracError", "InvariantViolation", "RankDrop",
    "Form", "Multivector", "basis_form", "basis_vector", "contract", "contract_multi", "evaluate", "vector", "wedge",
    "Ambient", "GradedElement", "Subspace", "pairing", "perp", "span_of",
    "Classification", "HigherPoissonPair", "IsotropicTriple", "b_preserves_weak", "b_transform", "classify",
    "construct", "decompose", "extract_higher_poisson", "graph_of_form", "graph_of_top_multivector", "restrict",
    "Poly", "Frame", "PolySection", "courant_dorfman", "d", "involutive", "lie_bracket", "lie_derivative",
    "LeafModel", "SkewForm", "cocycle_check", "delta", "higher_dirac_leaf_check", "restrict_to_leaf",
]
