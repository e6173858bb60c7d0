"""Tests for epsilon-models, truncation and the transitive collapse."""

import random
from dataclasses import replace

import pytest

from umt.entities import EMPTY, Atom, HFSet, hfset
from umt.errors import PreconditionError
from umt.mostowski import (
    EpsilonModel,
    allocate_atoms,
    base_violation,
    check_base,
    collapse,
    epsilon_model_of,
    is_extensional_over,
    nu_holds,
    nu_levels,
    rename_atoms,
    truncate,
    verify_collapse,
)

atom_a, atom_b = Atom("atom_a"), Atom("atom_b")


def _extend(M: EpsilonModel, nodes=(), edges=()) -> EpsilonModel:
    return EpsilonModel(M.carrier + tuple(nodes), M.edges | frozenset(edges), M.base)


class TestTruncation:
    """Tests for ν-levels and truncation."""

    def test_levels(self, small_model):
        assert nu_levels(small_model) == {"X": 1, "a": 0, "b": 0, "s": 1}

    def test_nu_formula_agrees_with_levels(self, small_model):
        assert nu_holds(small_model, "a", 0)
        assert not nu_holds(small_model, "s", 0)
        assert nu_holds(small_model, "s", 1)

    def test_cycle_is_dropped(self, small_model):
        M = _extend(small_model, nodes=["c", "d"], edges=[("c", "c")])
        levels = nu_levels(M)
        assert levels["c"] is None
        assert levels["d"] == 1
        assert truncate(M).carrier == ("X", "a", "b", "s", "d")

    def test_truncation_of_a_well_founded_model(self, small_model):
        assert truncate(small_model) == small_model

    def test_base_violation(self, small_model):
        M = _extend(small_model, edges=[("s", "a")])
        assert not check_base(M)
        assert base_violation(M) == ("s", "a")
        with pytest.raises(PreconditionError) as exc:
            truncate(M)
        assert exc.value.witness == ("s", "a")

    def test_edges_stay_in_the_carrier(self):
        with pytest.raises(PreconditionError):
            EpsilonModel(("X",), frozenset({("a", "X")}), "X")


class TestCollapse:
    """Tests for the collapse onto a transitive set."""

    def test_collapse(self, small_model):
        r = collapse(small_model)
        assert r.h["a"] == atom_a
        assert r.h["s"] == HFSet([atom_a])
        assert r.h["X"] == HFSet([atom_a, atom_b])
        assert r.levels == {"X": 1, "a": 0, "b": 0, "s": 1}
        assert verify_collapse(small_model, r).passed

    def test_bounded_submodel_check(self, small_model):
        report = verify_collapse(small_model, collapse(small_model), depth=1)
        assert report.passed
        assert report.statistics["nodes"] == 4

    def test_not_extensional(self, small_model):
        M = _extend(small_model, nodes=["t"], edges=[("a", "t")])
        assert is_extensional_over(M) == (False, ("s", "t"))
        with pytest.raises(PreconditionError) as exc:
            collapse(M)
        assert exc.value.witness == ("s", "t")

    def test_cycle_blocks_collapse(self, small_model):
        with pytest.raises(PreconditionError):
            collapse(_extend(small_model, nodes=["c"], edges=[("c", "c")]))

    def test_tampered_map_is_caught(self, small_model):
        r = collapse(small_model)
        bad = replace(r, h={**r.h, "s": HFSet([atom_b])})
        report = verify_collapse(small_model, bad)
        assert not report.passed
        assert any(c.detail == "membership is not preserved" for c in report.counterexamples)

    def test_atom_names_fall_back_to_positions(self):
        M = EpsilonModel(("X", "a-1"), frozenset({("a-1", "X")}), "X")
        assert allocate_atoms(M) == {"a-1": Atom("atom_1")}


class TestRoundTrip:
    """Tests for collapsing the membership graph of an entity."""

    @pytest.mark.parametrize(
        "entity",
        [
            hfset(hfset("a"), "b"),
            hfset("a", hfset("a", "b")),
            hfset(hfset(hfset("a")), hfset("a"), "a"),
        ],
    )
    def test_collapse_recovers_the_entity(self, entity):
        M, names = epsilon_model_of(entity)
        r = collapse(M)
        assert verify_collapse(M, r).passed
        back = {r.atoms[names[x]]: x for x in names if x.is_atom}
        assert rename_atoms(r.h[names[entity]], back) == entity

    def test_base_node_is_added_when_missing(self):
        M, names = epsilon_model_of(hfset(hfset("a"), "b"))
        assert M.base == "base"
        assert M.base_members == [names[Atom("a")], names[Atom("b")]]

    def test_existing_atom_set_is_the_base(self):
        M, names = epsilon_model_of(hfset("a", hfset("a", "b")))
        assert M.base == names[hfset("a", "b")]

    def test_rename_atoms(self):
        assert rename_atoms(hfset("a", hfset("b")), {Atom("b"): Atom("c")}) == hfset("a", hfset("c"))


def _random_entity(rng: random.Random, steps: int = 3) -> HFSet:
    pool = [Atom("a"), Atom("b"), EMPTY]
    for _ in range(steps):
        pool.append(HFSet(rng.sample(pool, rng.randint(1, 3))))
    return pool[-1]


def _random_model(rng: random.Random, size: int = 4) -> EpsilonModel:
    inner = [f"n{k}" for k in range(size)]
    sources = ["y0", "y1", "X", *inner]
    edges = {("y0", "X"), ("y1", "X")}
    edges |= {(b, a) for a in inner for b in sources if rng.random() < 0.3}
    return EpsilonModel(("X", "y0", "y1", *inner), frozenset(edges), "X")


class TestRandomModels:
    """Seeded sweeps over generated entities and epsilon-models."""

    def test_entities_survive_the_collapse(self):
        rng = random.Random(21)
        for _ in range(100):
            entity = _random_entity(rng)
            M, names = epsilon_model_of(entity)
            r = collapse(M)
            assert verify_collapse(M, r).passed, entity
            back = {r.atoms[names[x]]: x for x in names if x.is_atom}
            assert rename_atoms(r.h[names[entity]], back) == entity

    def test_truncation_is_idempotent(self):
        rng = random.Random(22)
        for _ in range(100):
            once = truncate(_random_model(rng))
            assert truncate(once) == once
            assert all(level is not None for level in nu_levels(once).values())
