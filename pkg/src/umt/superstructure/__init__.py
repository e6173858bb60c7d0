"""Hereditarily finite entities over a base set of atoms, and bounded membership truth."""

from umt.superstructure.closure import CLOSURE_ITEMS, check_closure_properties
from umt.superstructure.constructions import (
    apply,
    big_intersection,
    big_union,
    choice_product,
    compose,
    decode_pair,
    decode_relation,
    decode_tuple,
    difference,
    domain,
    function_space,
    image,
    intersection,
    inverse,
    is_function,
    is_injective,
    is_relation,
    is_subset,
    is_surjective,
    kuratowski,
    members_union,
    powerset,
    product,
    range_of,
    transitive_closure,
    tuple_entity,
    union,
)
from umt.superstructure.encoding import StructureEncoding, bar_formula, check_encoding, encode_structure
from umt.superstructure.evaluation import Environment, eval_bounded, eval_entity_term
from umt.superstructure.levels import (
    BaseSet,
    base_set,
    build_supertransitive,
    check_atoms,
    enumerate_vn,
    is_supertransitive,
    is_transitive,
    level_entity,
    rank,
    vn_size,
)

__all__ = [
    "CLOSURE_ITEMS",
    "BaseSet",
    "Environment",
    "StructureEncoding",
    "apply",
    "bar_formula",
    "base_set",
    "big_intersection",
    "big_union",
    "build_supertransitive",
    "check_atoms",
    "check_closure_properties",
    "check_encoding",
    "choice_product",
    "compose",
    "decode_pair",
    "decode_relation",
    "decode_tuple",
    "difference",
    "domain",
    "encode_structure",
    "enumerate_vn",
    "eval_bounded",
    "eval_entity_term",
    "function_space",
    "image",
    "intersection",
    "inverse",
    "is_function",
    "is_injective",
    "is_relation",
    "is_subset",
    "is_supertransitive",
    "is_surjective",
    "is_transitive",
    "kuratowski",
    "level_entity",
    "members_union",
    "powerset",
    "product",
    "range_of",
    "rank",
    "transitive_closure",
    "tuple_entity",
    "union",
    "vn_size",
]
