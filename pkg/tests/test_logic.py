"""Tests for formula syntax, the parser and the printer."""

import pytest

from umt.entities import Atom, HFSet, hfset
from umt.errors import ArityError, FormulaSyntaxError, PreconditionError, UnknownSymbolError
from umt.logic import (
    And,
    BoundedExists,
    BoundedForall,
    EntityConst,
    Eq,
    Exists,
    Forall,
    Iff,
    Implies,
    Language,
    Mem,
    Not,
    Or,
    Rel,
    Variable,
    check_language,
    conjunction,
    disjunction,
    entity_constants,
    format_formula,
    formula_depth,
    free_variables,
    fresh_variable,
    is_bounded,
    parse_formula,
    reduce_connectives,
    relativize_membership,
    star_transform,
    substitute,
    tokenize,
    unique_bounded_exists,
)
from umt.superstructure import eval_bounded

x, y, z = Variable("x"), Variable("y"), Variable("z")


class TestParser:
    """Tests for the surface grammar."""

    def test_negation_binds_tighter_than_and_and_or(self):
        f = parse_formula("not x = y and y = x or x = x")
        assert f == Or(And(Not(Eq(x, y)), Eq(y, x)), Eq(x, x))

    def test_binary_connectives_associate_left(self):
        f = parse_formula("x = y -> y = x -> x = x")
        assert f == Implies(Implies(Eq(x, y), Eq(y, x)), Eq(x, x))

    def test_iff_is_loosest(self):
        f = parse_formula("x = y -> y = x <-> x = x")
        assert f == Iff(Implies(Eq(x, y), Eq(y, x)), Eq(x, x))

    def test_quantifier_body_extends_right(self):
        f = parse_formula("forall x . x = x and x = y")
        assert f == Forall("x", And(Eq(x, x), Eq(x, y)))

    def test_bounded_quantifiers(self):
        assert parse_formula("forall x in y . x in z") == BoundedForall("x", y, Mem(x, z))
        assert parse_formula("exists x in y . x = x") == BoundedExists("x", y, Eq(x, x))
        assert parse_formula("exists x . x = x") == Exists("x", Eq(x, x))

    def test_negated_atoms(self):
        assert parse_formula("x != y") == Not(Eq(x, y))
        assert parse_formula("x notin y") == Not(Mem(x, y))

    def test_entity_constants(self):
        f = parse_formula("x in C_{{a,b}}")
        assert f == Mem(x, EntityConst(hfset("a", "b")))
        assert entity_constants(f) == {hfset("a", "b")}

    def test_nested_entity_constant(self):
        f = parse_formula("C_{{a,{b}}} = C_{{{b},a}}")
        assert f.left == f.right

    def test_relations_from_language(self, graph_language):
        assert parse_formula("R(x, y)", graph_language) == Rel("R", (x, y))

    def test_unknown_relation(self):
        with pytest.raises(UnknownSymbolError):
            parse_formula("S(x)")

    def test_wrong_arity(self, graph_language):
        with pytest.raises(ArityError):
            parse_formula("R(x)", graph_language)

    def test_relation_name_is_not_a_variable(self, graph_language):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("forall R . R(x, x)", graph_language)

    def test_error_position(self):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse_formula("forall x x = x")
        assert exc.value.line == 1
        assert exc.value.column == 10

    def test_unexpected_character(self):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse_formula("x = y $")
        assert exc.value.column == 7

    def test_error_on_second_line(self):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse_formula("x = y and\n  y =")
        assert exc.value.line == 2

    @pytest.mark.parametrize("text,column", [("", 1), ("not", 4), ("forall x .", 11)])
    def test_truncated_input(self, text, column):
        """Test that input ending early reports the end position."""
        with pytest.raises(FormulaSyntaxError) as exc:
            parse_formula(text)
        assert exc.value.line == 1
        assert exc.value.column == column

    def test_unterminated_entity_constant(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("x in C_{{a,b}")

    def test_tokenize_ends_with_eof(self):
        tokens = tokenize("forall x in y . x = x")
        assert [t.kind for t in tokens][-1] == "eof"
        assert [t.text for t in tokens[:4]] == ["forall", "x", "in", "y"]


class TestPrinter:
    """Tests for pretty printing."""

    @pytest.mark.parametrize(
        "text",
        [
            "forall x in y . x != y",
            "not (x = y and y = x)",
            "(x = y or y = x) and x = x",
            "x notin y -> (exists z in y . z in x)",
            "x in C_{{a,{b}}}",
        ],
    )
    def test_printed_text_is_canonical(self, text):
        assert format_formula(parse_formula(text)) == text

    def test_quantifier_inside_conjunction_is_wrapped(self):
        f = And(Forall("x", Eq(x, x)), Eq(y, y))
        text = format_formula(f)
        assert text == "(forall x . x = x) and y = y"
        assert parse_formula(text) == f

    def test_relation_atoms(self, graph_language):
        f = parse_formula("not R(x, y) or R(y, x)", graph_language)
        assert parse_formula(format_formula(f), graph_language) == f


class TestSyntax:
    """Tests for traversals and rewrites."""

    def test_free_variables_include_bound_terms(self):
        f = parse_formula("forall x in y . x in z")
        assert free_variables(f) == {"y", "z"}

    def test_conjunction_and_disjunction(self):
        """Test left nesting and refusal of an empty list."""
        parts = [Eq(x, y), Eq(y, z), Eq(x, z)]
        assert conjunction(parts) == And(And(parts[0], parts[1]), parts[2])
        assert disjunction(parts[:1]) == parts[0]
        assert free_variables(conjunction([Eq(y, y)])) == {"y"}
        with pytest.raises(PreconditionError):
            conjunction([])
        with pytest.raises(PreconditionError):
            disjunction([])

    def test_depth_counts_reduced_connectives(self):
        assert formula_depth(parse_formula("x = y")) == 0
        assert formula_depth(parse_formula("forall x . not x = x")) == 2
        assert formula_depth(parse_formula("exists x . x = x")) == 3
        assert formula_depth(parse_formula("x = y or y = x")) == 3

    def test_reduce_connectives_uses_core(self):
        f = reduce_connectives(parse_formula("(x = y <-> y = x) -> exists z . z = x"))
        text = format_formula(f)
        assert "->" not in text and "<->" not in text and " or " not in text and "exists" not in text

    def test_substitute_respects_binding(self):
        f = parse_formula("x = y and forall x . x = y")
        const = EntityConst(Atom("a"))
        out = substitute(f, {"x": const, "y": const})
        assert out == And(Eq(const, const), Forall("x", Eq(x, const)))

    def test_star_transform_replaces_constants(self):
        f = parse_formula("x in C_{{a}}")
        out = star_transform(f, {hfset("a"): hfset("b")})
        assert out == Mem(x, EntityConst(hfset("b")))

    def test_star_transform_unmapped_constant(self):
        with pytest.raises(PreconditionError):
            star_transform(parse_formula("x in C_{{a}}"), {})

    def test_relativize_membership(self):
        f = relativize_membership(parse_formula("forall z in y . z in x"))
        assert f == Forall("z", Implies(Rel("E", (z, y)), Rel("E", (z, x))))
        assert is_bounded(parse_formula("forall z in y . z in x"))
        assert not is_bounded(f)

    def test_bounded_quantifier_cannot_bind_its_bound(self):
        with pytest.raises(PreconditionError):
            BoundedForall("x", x, Eq(x, x))

    def test_membership_in_first_order_context(self):
        with pytest.raises(PreconditionError):
            check_language(parse_formula("x in y"), Language())

    def test_fresh_variable(self):
        assert fresh_variable({"v0", "v1"}) == "v2"
        assert fresh_variable({"x"}, "u") == "u0"

    def test_unique_bounded_exists(self):
        f = unique_bounded_exists("y", "s", Eq(Variable("y"), Variable("t")))
        assert eval_bounded(f, {"s": hfset("a", "b"), "t": Atom("a")})
        assert not eval_bounded(f, {"s": hfset("a", "b"), "t": Atom("c")})
        assert not eval_bounded(
            unique_bounded_exists("y", "s", Eq(Variable("y"), Variable("y"))), {"s": hfset("a", "b")}
        )

    def test_language_rejects_shared_names(self):
        with pytest.raises(PreconditionError):
            Language({"R": 2}, {"R": 1})

    def test_empty_set_literal(self):
        assert parse_formula("x = C_{{}}").right == EntityConst(HFSet())
