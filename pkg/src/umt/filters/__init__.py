"""Filters and ultrafilters over finite index sets."""

from umt.filters.core import (
    Filter,
    Index,
    SetFamily,
    Ultrafilter,
    enumerate_filters,
    enumerate_ultrafilters,
    extend_to_ultrafilter,
    generate_filter,
    has_fip,
    is_countably_incomplete,
    is_filter,
    is_maximal_filter,
    is_ultrafilter,
    partition_block,
    principal,
    subsets,
)

__all__ = [
    "Filter",
    "Index",
    "SetFamily",
    "Ultrafilter",
    "enumerate_filters",
    "enumerate_ultrafilters",
    "extend_to_ultrafilter",
    "generate_filter",
    "has_fip",
    "is_countably_incomplete",
    "is_filter",
    "is_maximal_filter",
    "is_ultrafilter",
    "partition_block",
    "principal",
    "subsets",
]
