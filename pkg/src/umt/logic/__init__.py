"""Syntax layer: languages, terms, formulas, parsing and named formula families."""

from umt.logic.builders import (
    PHI_KINDS,
    base_formula,
    build_base,
    build_nu,
    build_phi,
    build_psi_hyperfinite,
    nu,
    phi_empty,
    phi_finite_set,
    phi_function,
    phi_level_member,
    phi_level_set,
    phi_pair,
    phi_product,
    phi_subset,
    phi_tuple,
)
from umt.logic.parser import parse_formula, tokenize
from umt.logic.printer import format_formula, format_term
from umt.logic.syntax import (
    EMPTY_LANGUAGE,
    EPSILON_LANGUAGE,
    And,
    Apply,
    BoundedExists,
    BoundedForall,
    Constant,
    EntityConst,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Language,
    Mem,
    Not,
    Or,
    Rel,
    Term,
    Variable,
    all_variables,
    check_language,
    conjunction,
    disjunction,
    entity_constants,
    formula_depth,
    free_variables,
    fresh_variable,
    is_bounded,
    reduce_connectives,
    relativize_membership,
    rename_free,
    star_transform,
    subformulas,
    substitute,
    unique_bounded_exists,
)

__all__ = [
    "PHI_KINDS",
    "EMPTY_LANGUAGE",
    "EPSILON_LANGUAGE",
    "And",
    "Apply",
    "BoundedExists",
    "BoundedForall",
    "Constant",
    "EntityConst",
    "Eq",
    "Exists",
    "Forall",
    "Formula",
    "Iff",
    "Implies",
    "Language",
    "Mem",
    "Not",
    "Or",
    "Rel",
    "Term",
    "Variable",
    "all_variables",
    "base_formula",
    "build_base",
    "build_nu",
    "build_phi",
    "build_psi_hyperfinite",
    "check_language",
    "conjunction",
    "disjunction",
    "entity_constants",
    "format_formula",
    "format_term",
    "formula_depth",
    "free_variables",
    "fresh_variable",
    "is_bounded",
    "nu",
    "parse_formula",
    "phi_empty",
    "phi_finite_set",
    "phi_function",
    "phi_level_member",
    "phi_level_set",
    "phi_pair",
    "phi_product",
    "phi_subset",
    "phi_tuple",
    "reduce_connectives",
    "relativize_membership",
    "rename_free",
    "star_transform",
    "subformulas",
    "substitute",
    "tokenize",
    "unique_bounded_exists",
]
