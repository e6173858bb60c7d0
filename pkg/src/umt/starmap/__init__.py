"""The ultrapower star map over finite index sets and its verification suites."""

from umt.starmap.checks import (
    check_bounded_embeddings,
    check_level_law,
    check_star_invariants,
    check_step4_laws,
    check_transfer,
    membership_structure,
    pointwise_functions,
    star_algebra_suite,
    star_structure_embedding,
)
from umt.starmap.comprehension import internal_definition, star_comprehension
from umt.starmap.context import (
    EXTERNAL,
    INTERNAL,
    STANDARD,
    Classification,
    PointwiseFunction,
    StarMapContext,
    corrupted,
)

__all__ = [
    "EXTERNAL",
    "INTERNAL",
    "STANDARD",
    "Classification",
    "PointwiseFunction",
    "StarMapContext",
    "check_bounded_embeddings",
    "check_level_law",
    "check_star_invariants",
    "check_step4_laws",
    "check_transfer",
    "corrupted",
    "internal_definition",
    "membership_structure",
    "pointwise_functions",
    "star_algebra_suite",
    "star_comprehension",
    "star_structure_embedding",
]
