"""Tests for finite structures, satisfaction, enumeration and diagrams."""

from itertools import product

import pytest

from umt.entities import Atom, hfset
from umt.errors import GuardError, PreconditionError, UnboundVariableError, UnknownSymbolError
from umt.logic import (
    And,
    Constant,
    Eq,
    Forall,
    Iff,
    Implies,
    Language,
    Not,
    Or,
    Rel,
    Variable,
    formula_depth,
    parse_formula,
)
from umt.semantics import (
    Structure,
    atomic_diagram,
    check_bounded_submodel,
    check_elementarily_equivalent,
    check_elementary_embedding,
    constant_names,
    elementary_diagram,
    enumerate_formulas,
    find_isomorphism,
    first_order_atoms,
    formula_pool,
    identity_map,
    is_embedding,
    layer_sizes,
    membership_atoms,
    satisfies,
    substructure,
)
from umt.semantics.satisfaction import evaluate
from umt.starmap import membership_structure


@pytest.fixture
def involution() -> Structure:
    """``f`` swaps 0 and 1, and the constant ``c`` is 0."""
    lang = Language(functions={"f": 1, "c": 0})
    return Structure(lang, ("0", "1"), functions={"f": {("0",): "1", ("1",): "0"}, "c": {(): "0"}})


@pytest.fixture
def loop_and_point(graph_language) -> Structure:
    """``u`` loops, ``v`` is isolated."""
    return Structure(graph_language, ("u", "v"), {"R": {("u", "u")}})


def _interpret_constants(A: Structure, B: Structure, h) -> Structure:
    names = constant_names(A)
    language = A.language.with_constants(names.values())
    return Structure(language, B.universe, B.relations, {names[a]: {(): h[a]} for a in A.universe})


def _oracle_term(s: Structure, t, env):
    if isinstance(t, Variable):
        return env[t.name]
    if isinstance(t, Constant):
        return s.functions[t.name][()]
    return s.functions[t.function][tuple(_oracle_term(s, a, env) for a in t.args)]


def _ground(s: Structure, f, env):
    """Unfold quantifiers over the universe into a tree of ("and"|"or"|"not", ...) nodes."""
    if isinstance(f, Rel):
        return tuple(_oracle_term(s, t, env) for t in f.args) in s.relations[f.name]
    if isinstance(f, Eq):
        return _oracle_term(s, f.left, env) == _oracle_term(s, f.right, env)
    if isinstance(f, Not):
        return ("not", _ground(s, f.body, env))
    if isinstance(f, And):
        return ("and", [_ground(s, f.left, env), _ground(s, f.right, env)])
    if isinstance(f, Or):
        return ("or", [_ground(s, f.left, env), _ground(s, f.right, env)])
    if isinstance(f, Implies):
        return ("or", [("not", _ground(s, f.left, env)), _ground(s, f.right, env)])
    if isinstance(f, Iff):
        left, right = _ground(s, f.left, env), _ground(s, f.right, env)
        return ("and", [("or", [("not", left), right]), ("or", [("not", right), left])])
    op = "and" if isinstance(f, Forall) else "or"
    return (op, [_ground(s, f.body, {**env, f.var: e}) for e in s.universe])


def _truth(tree) -> bool:
    if isinstance(tree, bool):
        return tree
    op, args = tree
    if op == "not":
        return not _truth(args)
    values = [_truth(t) for t in args]
    return all(values) if op == "and" else any(values)


def _graphs(graph_language, max_size: int):
    for size in range(1, max_size + 1):
        universe = tuple(str(n) for n in range(size))
        pairs = list(product(universe, repeat=2))
        for mask in range(2 ** len(pairs)):
            rows = {p for k, p in enumerate(pairs) if mask >> k & 1}
            yield Structure(graph_language, universe, {"R": rows})


class TestSatisfaction:
    """Tests for recursive satisfaction."""

    def test_quantifiers(self, two_cycle, graph_language):
        assert satisfies(two_cycle, parse_formula("forall x . exists y . R(x, y)", graph_language), {})
        assert not satisfies(two_cycle, parse_formula("exists x . R(x, x)", graph_language), {})

    def test_assignment(self, chain3, graph_language):
        f = parse_formula("exists y . R(x, y)", graph_language)
        assert satisfies(chain3, f, {"x": "p"})
        assert not satisfies(chain3, f, {"x": "r"})

    def test_functions_and_constants(self, involution):
        lang = involution.language
        assert satisfies(involution, parse_formula("forall x . f(f(x)) = x", lang), {})
        assert satisfies(involution, parse_formula("f(c) != c", lang), {})

    def test_unassigned_variable(self, chain3, graph_language):
        with pytest.raises(UnboundVariableError):
            satisfies(chain3, parse_formula("R(x, y)", graph_language), {"x": "p"})

    def test_unknown_symbol(self, chain3):
        with pytest.raises(UnknownSymbolError):
            satisfies(chain3, Rel("S", (Variable("x"),)), {"x": "p"})

    def test_membership_syntax_is_rejected(self, chain3):
        with pytest.raises(PreconditionError):
            satisfies(chain3, parse_formula("x in y"), {"x": "p", "y": "q"})

    def test_partial_function_table(self):
        lang = Language(functions={"f": 1})
        with pytest.raises(PreconditionError):
            Structure(lang, ("0", "1"), functions={"f": {("0",): "1"}})

    def test_duplicate_universe(self, graph_language):
        with pytest.raises(PreconditionError):
            Structure(graph_language, ("a", "a"))

    def test_scope_is_restored(self, chain3, graph_language):
        scope = {"x": "p"}
        evaluate(chain3, parse_formula("forall x . x = x", graph_language), scope)
        assert scope == {"x": "p"}


class TestOracle:
    """Tests comparing satisfaction with a quantifier-expansion truth table."""

    def test_handwritten_connectives(self, chain3, graph_language):
        f = parse_formula("(exists x . R(x, y)) <-> (forall z . R(z, y) -> z != y)", graph_language)
        for y in chain3.universe:
            assert satisfies(chain3, f, {"y": y}) == _truth(_ground(chain3, f, {"y": y}))

    def test_depth_one(self, two_cycle, chain3, loop, graph_language):
        formulas = enumerate_formulas(graph_language, 1, ("x", "y"))
        for s in (two_cycle, chain3, loop):
            for x, y in product(s.universe, repeat=2):
                env = {"x": x, "y": y}
                assert all(satisfies(s, f, env) == _truth(_ground(s, f, env)) for f in formulas)

    def test_functions(self, involution):
        f = parse_formula("forall x . exists y . f(y) = x and f(c) != c", involution.language)
        assert satisfies(involution, f, {}) == _truth(_ground(involution, f, {})) is True

    @pytest.mark.slow
    def test_depth_two_over_small_graphs(self, graph_language):
        formulas = enumerate_formulas(graph_language, 2, ("x", "y"))
        for s in _graphs(graph_language, 2):
            for x, y in product(s.universe, repeat=2):
                env = {"x": x, "y": y}
                for f in formulas:
                    assert satisfies(s, f, env) == _truth(_ground(s, f, env)), f


class TestEnumeration:
    """Tests for the layered formula enumeration."""

    def test_layer_sizes(self):
        assert layer_sizes(7, 2, 2) == [7, 42, 1281]

    def test_atoms_come_first(self, graph_language):
        atoms = first_order_atoms(graph_language, ("x", "y"))
        assert len(atoms) == 7
        assert atoms[0] == Rel("R", (Variable("x"), Variable("x")))
        assert len(membership_atoms(("x", "y"))) == 7

    def test_exhaustive_enumeration_matches_sizes(self, graph_language):
        formulas = enumerate_formulas(graph_language, 1, ("x", "y"))
        assert len(formulas) == 49
        assert len(set(formulas)) == 49
        assert max(formula_depth(f) for f in formulas) == 1

    def test_sampling_above_budget(self, graph_language):
        pool = formula_pool(graph_language, 2, ("x", "y"), budget=100, sample_size=50, seed=3)
        again = formula_pool(graph_language, 2, ("x", "y"), budget=100, sample_size=50, seed=3)
        assert pool.sampled
        assert pool.total == 1330
        assert 49 < len(pool) <= 99
        assert pool.formulas == again.formulas
        assert pool.statistics()["seed"] == 3

    def test_depth_cap(self, graph_language):
        with pytest.raises(GuardError):
            formula_pool(graph_language, 4, ("x", "y"))


class TestEmbeddings:
    """Tests for embeddings, isomorphisms and equivalence."""

    def test_identity_is_elementary(self, chain3):
        assert check_elementary_embedding(identity_map(chain3), chain3, chain3, depth=2).passed

    def test_first_counterexample_is_shallow(self, loop, two_cycle):
        report = check_elementary_embedding({"u": "a"}, loop, two_cycle, depth=2)
        assert not report.passed
        assert formula_depth(report.counterexamples[0].formula) == 0

    def test_map_must_be_total(self, loop, two_cycle):
        with pytest.raises(PreconditionError):
            check_elementary_embedding({}, loop, two_cycle)

    def test_is_embedding(self, two_cycle, chain3):
        assert is_embedding(identity_map(chain3), chain3, chain3)
        assert not is_embedding({"a": "p", "b": "q"}, two_cycle, chain3)

    def test_find_isomorphism(self, two_cycle, chain3):
        renamed = two_cycle.rename({"a": "c", "b": "d"})
        h = find_isomorphism(two_cycle, renamed)
        assert h is not None and set(h.values()) == {"c", "d"}
        assert find_isomorphism(chain3, two_cycle) is None

    def test_elementary_equivalence(self, two_cycle, loop, loop_and_point):
        assert check_elementarily_equivalent(two_cycle, two_cycle.rename({"a": "b", "b": "a"})).passed
        assert not check_elementarily_equivalent(loop, loop_and_point, depth=1).passed

    def test_transitive_submodel_is_bounded_elementary(self):
        world, names = membership_structure([Atom("a"), hfset("a"), hfset(hfset("a"))])
        inner = substructure(world, [names[hfset("a")], "a"])
        assert check_bounded_submodel(inner, world, depth=1).passed

    def test_non_transitive_submodel(self):
        world, names = membership_structure([Atom("a"), hfset("a"), hfset(hfset("a"))])
        inner = substructure(world, [names[hfset(hfset("a"))]])
        report = check_bounded_submodel(inner, world, depth=1)
        assert report.counterexamples[0].detail == "not a transitive submodel"


class TestDiagrams:
    """Tests for atomic and elementary diagrams."""

    def test_atomic_diagram(self, two_cycle):
        diagram = atomic_diagram(two_cycle)
        ca, cb = Constant("c_a"), Constant("c_b")
        assert len(diagram) == 7
        assert Rel("R", (ca, cb)) in diagram
        assert Not(Rel("R", (ca, ca))) in diagram

    def test_embedding_satisfies_atomic_diagram(self, two_cycle):
        h = {"a": "b", "b": "a"}
        target = _interpret_constants(two_cycle, two_cycle, h)
        assert all(evaluate(target, s, {}) for s in atomic_diagram(two_cycle))

    def test_automorphism_satisfies_elementary_diagram(self, two_cycle):
        h = {"a": "b", "b": "a"}
        target = _interpret_constants(two_cycle, two_cycle, h)
        assert all(evaluate(target, s, {}) for s in elementary_diagram(two_cycle, depth=1))

    def test_elementary_diagram_uses_a_variable_per_level(self, loop, graph_language):
        """Test that depth-two sentences with two bound variables are in the diagram."""
        diagram = elementary_diagram(loop, depth=2)
        assert parse_formula("forall x . forall y . R(x, y)", graph_language) in diagram
        assert parse_formula("forall y . forall x . R(x, y)", graph_language) in diagram
        assert parse_formula("forall x . forall y . x = y", graph_language) in diagram

    def test_embedding_that_is_not_elementary(self, loop, loop_and_point):
        h = {"u": "u"}
        assert is_embedding(h, loop, loop_and_point)
        target = _interpret_constants(loop, loop_and_point, h)
        assert not all(evaluate(target, s, {}) for s in elementary_diagram(loop, depth=1))
        assert not check_elementary_embedding(h, loop, loop_and_point, depth=1).passed
