"""Finite structures, satisfaction, formula enumeration and elementarity checks."""

from umt.semantics.embeddings import (
    DEFAULT_VARIABLES,
    atomic_diagram,
    check_bounded_submodel,
    check_elementarily_equivalent,
    check_elementary_embedding,
    constant_names,
    elementary_diagram,
    find_isomorphism,
    identity_map,
    is_embedding,
    is_isomorphism,
    is_transitive_submodel,
    rename_constants,
)
from umt.semantics.enumeration import (
    FormulaPool,
    bounded_formula_pool,
    enumerate_bounded_formulas,
    enumerate_formulas,
    first_order_atoms,
    formula_pool,
    layer_sizes,
    membership_atoms,
)
from umt.semantics.satisfaction import Assignment, eval_term, evaluate, satisfies
from umt.semantics.structures import Element, Structure, epsilon_structure, substructure

__all__ = [
    "DEFAULT_VARIABLES",
    "Assignment",
    "Element",
    "FormulaPool",
    "Structure",
    "atomic_diagram",
    "bounded_formula_pool",
    "check_bounded_submodel",
    "check_elementarily_equivalent",
    "check_elementary_embedding",
    "constant_names",
    "elementary_diagram",
    "enumerate_bounded_formulas",
    "enumerate_formulas",
    "epsilon_structure",
    "eval_term",
    "evaluate",
    "find_isomorphism",
    "first_order_atoms",
    "formula_pool",
    "identity_map",
    "is_embedding",
    "is_isomorphism",
    "is_transitive_submodel",
    "layer_sizes",
    "membership_atoms",
    "rename_constants",
    "satisfies",
    "substructure",
]
