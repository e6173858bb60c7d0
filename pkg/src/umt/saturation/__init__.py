"""Finite-scale checkers for enlargement, concurrency, hyperfiniteness and order reversals."""

from umt.saturation.coherence import check_coherence
from umt.saturation.concurrency import check_concurrent, common_bound, finite_subset_relation
from umt.saturation.enlargement import enlargement_check, enlargement_pipeline, extend_function
from umt.saturation.hyperfinite import (
    HyperfiniteWitness,
    is_hyperfinite,
    naturals_environment,
    numeral,
    numeral_prefix,
    with_numerals,
)
from umt.saturation.reversals import (
    OrderReversal,
    exit_levels,
    first_violation,
    is_anti_additive,
    is_locally_finite,
    is_order_reversal,
    local_bounds,
    localize,
    monotone_antiadditive,
    order_reversal_from_type,
    reversal_from_support,
    support_of,
    supports,
)

__all__ = [
    "HyperfiniteWitness",
    "OrderReversal",
    "check_coherence",
    "check_concurrent",
    "common_bound",
    "enlargement_check",
    "enlargement_pipeline",
    "exit_levels",
    "extend_function",
    "finite_subset_relation",
    "first_violation",
    "is_anti_additive",
    "is_hyperfinite",
    "is_locally_finite",
    "is_order_reversal",
    "local_bounds",
    "localize",
    "monotone_antiadditive",
    "naturals_environment",
    "numeral",
    "numeral_prefix",
    "order_reversal_from_type",
    "reversal_from_support",
    "support_of",
    "supports",
    "with_numerals",
]
