"""Pytest fixtures for the toolkit test suite."""

import os

import pytest

from umt.config import get_settings
from umt.logic.syntax import Language
from umt.mostowski import EpsilonModel
from umt.semantics.structures import Structure
from umt.starmap import StarMapContext


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Drop cached settings and any UMT_ overrides around every test."""
    for name in [k for k in os.environ if k.startswith("UMT_")]:
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def graph_language() -> Language:
    """A single binary relation."""
    return Language({"R": 2})


@pytest.fixture
def two_cycle(graph_language) -> Structure:
    """``R`` swaps the two elements."""
    return Structure(graph_language, ("a", "b"), {"R": {("a", "b"), ("b", "a")}})


@pytest.fixture
def chain3(graph_language) -> Structure:
    """A strict order on three elements."""
    return Structure(graph_language, ("p", "q", "r"), {"R": {("p", "q"), ("q", "r"), ("p", "r")}})


@pytest.fixture
def loop(graph_language) -> Structure:
    """One element related to itself."""
    return Structure(graph_language, ("u",), {"R": {("u", "u")}})


@pytest.fixture
def ctx() -> StarMapContext:
    """Canonical star map over two atoms, rank bound 3."""
    return StarMapContext.create(["a", "b"], 3, canonicalize=True)


@pytest.fixture
def renaming_ctx() -> StarMapContext:
    """Star map over two atoms with atom classes named ``U_<atom>``, two indices."""
    return StarMapContext.create(["a", "b"], 3, index_set=("0", "1"), point="1", canonicalize=False)


@pytest.fixture
def small_model() -> EpsilonModel:
    """Base ``X`` with members ``a`` and ``b``, plus the node ``s`` holding only ``a``."""
    return EpsilonModel(("X", "a", "b", "s"), frozenset({("a", "X"), ("b", "X"), ("a", "s")}), "X")
