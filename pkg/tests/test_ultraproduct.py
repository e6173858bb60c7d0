"""Tests for reduced products, ultraproducts, Łoś checks, compactness and types."""

import random

import pytest

from umt.errors import PreconditionError
from umt.filters import Filter, enumerate_ultrafilters, principal
from umt.logic import Language, parse_formula
from umt.semantics import Structure, satisfies
from umt.ultraproduct import (
    IndexedFamily,
    build_reduced_product,
    build_ultraproduct,
    check_congruence,
    check_support,
    class_id,
    compactness_witness,
    diagonal_embedding,
    los_check,
    pointwise_truth,
    principal_collapse,
    realize_from_support,
    type_order_reversal,
)

INDICES = ("0", "1", "2")


@pytest.fixture
def mixed_family(graph_language) -> IndexedFamily:
    """A loop at index 0 and an empty relation at index 1."""
    looped = Structure(graph_language, ("u",), {"R": {("u", "u")}})
    bare = Structure(graph_language, ("u",), {"R": set()})
    return IndexedFamily(("0", "1"), {"0": looped, "1": bare})


@pytest.fixture
def orders(chain3, two_cycle) -> IndexedFamily:
    return IndexedFamily(("0", "1"), {"0": chain3, "1": two_cycle})


class TestProducts:
    """Tests for building reduced products and ultraproducts."""

    def test_ultrapower_size(self, two_cycle):
        fam = IndexedFamily.power(two_cycle, INDICES)
        up = build_ultraproduct(fam, principal(INDICES, "1"))
        assert up.structure.universe == (class_id(["a"]), class_id(["b"]))
        assert up.structure.holds("R", ["<a>", "<b>"])

    def test_reduced_product_over_core(self, two_cycle):
        fam = IndexedFamily.power(two_cycle, INDICES)
        up = build_reduced_product(fam, Filter(INDICES, frozenset({"0", "2"})))
        assert up.structure.size == 4
        assert not up.is_ultra

    def test_ultraproduct_needs_ultrafilter(self, two_cycle):
        fam = IndexedFamily.power(two_cycle, INDICES)
        with pytest.raises(PreconditionError):
            build_ultraproduct(fam, Filter(INDICES, frozenset({"0", "2"})))

    def test_classes_follow_the_principal_point(self, two_cycle):
        fam = IndexedFamily.power(two_cycle, INDICES)
        up = build_ultraproduct(fam, principal(INDICES, "1"))
        f = {"0": "a", "1": "b", "2": "a"}
        g = {"0": "b", "1": "b", "2": "b"}
        assert up.equivalent(f, g)
        assert up.class_of(f) == up.class_of(g) == "<b>"

    def test_class_names_keep_commas_apart(self, graph_language):
        """Test that element ids containing commas still give distinct classes."""
        left = Structure(graph_language, ("a,b", "a"), {"R": set()})
        right = Structure(graph_language, ("c", "b,c"), {"R": set()})
        fam = IndexedFamily(("0", "1"), {"0": left, "1": right})
        up = build_reduced_product(fam, Filter(("0", "1"), frozenset({"0", "1"})))
        assert up.structure.size == 4
        assert class_id(["a,b", "c"]) == "<a\\,b,c>"
        assert class_id(["a", "b,c"]) == "<a,b\\,c>"
        assert up.class_of({"0": "a,b", "1": "c"}) != up.class_of({"0": "a", "1": "b,c"})

    def test_congruence(self, chain3):
        fam = IndexedFamily.power(chain3, INDICES)
        up = build_reduced_product(fam, Filter(INDICES, frozenset({"0", "1"})))
        assert check_congruence(up).passed

    def test_factors_share_a_language(self, two_cycle):
        other = Structure(Language({"S": 1}), ("a",))
        with pytest.raises(PreconditionError):
            IndexedFamily(("0", "1"), {"0": two_cycle, "1": other})

    def test_pointwise_truth(self, mixed_family):
        truth = pointwise_truth(mixed_family, parse_formula("R(x, x)", mixed_family.language), {"x": {"0": "u", "1": "u"}})
        assert truth == frozenset({"0"})


class TestLos:
    """Tests for truth in ultraproducts."""

    def test_power_of_two_cycle(self, two_cycle):
        fam = IndexedFamily.power(two_cycle, INDICES)
        report = los_check(fam, principal(INDICES, "1"), depth=1)
        assert report.passed
        assert report.statistics["choice_functions"] == 8

    def test_mixed_factors(self, orders):
        assert los_check(orders, principal(("0", "1"), "1"), depth=1).passed

    def test_negation_fails_over_a_proper_filter(self, mixed_family):
        report = los_check(mixed_family, Filter(("0", "1"), frozenset({"0", "1"})), depth=1)
        assert not report.passed
        first = report.counterexamples[0]
        assert first.witness["product"] is True
        assert first.witness["in_filter"] is False

    @pytest.mark.slow
    def test_depth_two(self, chain3):
        fam = IndexedFamily.power(chain3, ("0", "1"))
        assert los_check(fam, principal(("0", "1"), "0"), depth=2).passed

    @pytest.mark.slow
    def test_unary_families(self):
        """Test every ultrafilter over seeded families of one-predicate structures."""
        lang = Language({"P": 1})
        rng = random.Random(5)
        for _ in range(4):
            structures = {}
            for i in INDICES:
                universe = ("u", "v")[: rng.randint(1, 2)]
                structures[i] = Structure(lang, universe, {"P": {(e,) for e in universe if rng.random() < 0.5}})
            fam = IndexedFamily(INDICES, structures)
            for U in enumerate_ultrafilters(INDICES):
                assert los_check(fam, U, depth=2).passed
                assert principal_collapse(fam, U)[1].passed


class TestPrincipalCollapse:
    """Tests for the collapse of an ultraproduct onto its principal factor."""

    def test_collapse_is_an_isomorphism(self, orders):
        h, report = principal_collapse(orders, principal(("0", "1"), "1"))
        assert report.passed
        assert set(h.values()) == {"a", "b"}

    def test_diagonal_embedding(self, chain3):
        h, report = diagonal_embedding(chain3, ["0", "1"], principal(["0", "1"], "0"), depth=1)
        assert report.passed
        assert report.statistics["surjective"] is True
        assert h["p"] == "<p>"


class TestCompactness:
    """Tests for the ultraproduct of finite-subset models."""

    @pytest.fixture
    def sentences(self, graph_language):
        return [
            parse_formula("exists x . R(x, x)", graph_language),
            parse_formula("exists x . not R(x, x)", graph_language),
        ]

    def test_witness_models_every_sentence(self, sentences, loop, two_cycle, graph_language):
        both = Structure(graph_language, ("u", "v"), {"R": {("u", "u")}})
        models = {
            frozenset([sentences[0]]): loop,
            frozenset([sentences[1]]): two_cycle,
            frozenset(sentences): both,
        }
        model = compactness_witness(sentences, models)
        assert all(satisfies(model, s, {}) for s in sentences)

    def test_missing_subset_model(self, sentences, loop):
        with pytest.raises(PreconditionError):
            compactness_witness(sentences, {frozenset([sentences[0]]): loop})

    def test_claimed_model_must_satisfy_its_subset(self, sentences, loop, two_cycle):
        models = {
            frozenset([sentences[0]]): two_cycle,
            frozenset([sentences[1]]): two_cycle,
            frozenset(sentences): loop,
        }
        with pytest.raises(PreconditionError):
            compactness_witness(sentences, models)


class TestTypes:
    """Tests for type reversals and realization from a support."""

    @pytest.fixture
    def sigma(self, graph_language):
        return [
            parse_formula("exists y . R(x, y)", graph_language),
            parse_formula("exists y . R(y, x)", graph_language),
        ]

    def test_type_order_reversal(self, orders, sigma):
        p = type_order_reversal(orders, sigma)
        assert p[frozenset()] == frozenset({"0", "1"})
        assert p[frozenset(sigma)] == frozenset({"0", "1"})

    def test_realize_from_support(self, orders, sigma):
        support = {"0": sigma, "1": sigma}
        realization = realize_from_support(orders, principal(("0", "1"), "0"), sigma, support)
        assert realization.element == "<q>"
        assert realization.choice == {"0": "q", "1": "a"}
        assert realization.report.passed

    def test_support_outside_the_ultrafilter(self, orders, sigma):
        report = check_support(orders, principal(("0", "1"), "0"), sigma, {"0": [], "1": sigma})
        assert not report.passed
        with pytest.raises(PreconditionError):
            realize_from_support(orders, principal(("0", "1"), "0"), sigma, {"0": [], "1": sigma})

    def test_type_formulas_have_one_free_variable(self, orders, graph_language):
        with pytest.raises(PreconditionError):
            type_order_reversal(orders, [parse_formula("R(x, y)", graph_language)])
