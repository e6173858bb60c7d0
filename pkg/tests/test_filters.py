"""Tests for filters and ultrafilters over finite index sets."""

import pytest

from umt.errors import PreconditionError
from umt.filters import (
    Filter,
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
)

INDICES = ("1", "2", "3")


class TestFamilies:
    """Tests for set families and the finite intersection property."""

    def test_fip(self):
        assert has_fip(SetFamily.of(INDICES, [["1", "2"], ["2", "3"]]))
        assert not has_fip(SetFamily.of(INDICES, [["1"], ["2"]]))

    def test_empty_family_has_fip(self):
        family = SetFamily.of(INDICES, [])
        assert has_fip(family)
        assert family.intersection() == frozenset(INDICES)

    def test_member_outside_index_set(self):
        with pytest.raises(PreconditionError):
            SetFamily.of(INDICES, [["4"]])

    def test_ordered_members(self):
        family = SetFamily.of(INDICES, [["2", "3"], ["1"], ["3", "1"]])
        assert family.ordered_members() == [("1",), ("1", "3"), ("2", "3")]


class TestFilters:
    """Tests for generated filters."""

    def test_generate_filter(self):
        F = generate_filter(SetFamily.of(INDICES, [["1", "2"], ["1", "2", "3"]]))
        assert F.core == frozenset({"1", "2"})
        assert not F.is_ultra
        assert F.contains(["1", "2", "3"])
        assert not F.contains(["1"])
        assert len(F.members) == 2

    def test_generate_without_fip(self):
        with pytest.raises(PreconditionError) as exc:
            generate_filter(SetFamily.of(INDICES, [["1"], ["2"]]))
        assert exc.value.witness == [("1",), ("2",)]

    def test_core_must_be_nonempty(self):
        with pytest.raises(PreconditionError):
            Filter(INDICES, frozenset())

    def test_is_filter(self):
        assert is_filter(generate_filter(SetFamily.of(INDICES, [["1", "2"]])))
        assert not is_filter(SetFamily.of(INDICES, [["1", "2"]]))
        assert not is_filter(SetFamily.of(INDICES, [[], ["1"], ["1", "2", "3"]]))

    def test_enumerate_filters(self):
        filters = enumerate_filters(INDICES)
        assert len(filters) == 7
        assert all(is_filter(F) for F in filters)
        assert [F.is_ultra for F in filters].count(True) == 3

    def test_maximal_filters_are_ultra(self):
        for F in enumerate_filters(INDICES):
            assert is_maximal_filter(F) == is_ultrafilter(F) == F.is_ultra

    def test_countable_incompleteness_is_impossible(self):
        incomplete, reason = is_countably_incomplete(principal(INDICES, "1"))
        assert not incomplete
        assert "3 elements" in reason


class TestUltrafilters:
    """Tests for principal ultrafilters and extension."""

    def test_extend_picks_first_index_of_intersection(self):
        U = extend_to_ultrafilter(SetFamily.of(INDICES, [["2", "3"], ["1", "2", "3"]]))
        assert U.principal_point == "2"
        assert is_ultrafilter(U)

    def test_extend_empty_family(self):
        assert extend_to_ultrafilter(SetFamily.of(INDICES, [])).principal_point == "1"

    def test_extend_without_fip(self):
        with pytest.raises(PreconditionError):
            extend_to_ultrafilter(SetFamily.of(INDICES, [["1"], ["3"]]))

    def test_ultrafilters_are_principal(self):
        with pytest.raises(PreconditionError):
            Ultrafilter(INDICES, frozenset({"1", "2"}))
        assert [U.principal_point for U in enumerate_ultrafilters(INDICES)] == list(INDICES)

    def test_principal_point_must_be_an_index(self):
        with pytest.raises(PreconditionError):
            principal(INDICES, "9")

    def test_as_ultrafilter(self):
        F = generate_filter(SetFamily.of(INDICES, [["3"]]))
        assert F.as_ultrafilter().principal_point == "3"
        with pytest.raises(PreconditionError):
            generate_filter(SetFamily.of(INDICES, [["1", "3"]])).as_ultrafilter()

    def test_partition_block(self):
        U = principal(INDICES, "2")
        assert partition_block(U, [["1"], ["2", "3"]]) == frozenset({"2", "3"})
        with pytest.raises(PreconditionError):
            partition_block(U, [["1", "2"], ["2", "3"]])
        with pytest.raises(PreconditionError):
            partition_block(U, [["1"], ["2"]])
