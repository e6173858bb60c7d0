"""Epsilon-models, truncation by ν-levels, and the collapse onto transitive sets."""

from umt.mostowski.collapse import CollapseResult, allocate_atoms, collapse, rename_atoms, verify_collapse
from umt.mostowski.model import (
    EpsilonModel,
    base_violation,
    check_base,
    epsilon_model_of,
    is_extensional_over,
    nu_holds,
    nu_levels,
    truncate,
)

__all__ = [
    "CollapseResult",
    "EpsilonModel",
    "allocate_atoms",
    "base_violation",
    "check_base",
    "collapse",
    "epsilon_model_of",
    "is_extensional_over",
    "nu_holds",
    "nu_levels",
    "rename_atoms",
    "truncate",
    "verify_collapse",
]
