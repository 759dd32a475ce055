import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from loopforms.errors import ContextError, ParseError, SemanticError
from loopforms.jet import JetExpression
from loopforms.parser import parse_expr, parse_ratfun
from loopforms.poly import PolyRing
from loopforms.printer import format_jet
from loopforms.randgen import random_jet
from loopforms.ratfun import format_ratfun

R = PolyRing(["u1", "u2", "u3"])


def test_jet_variable():
    assert parse_expr("u1_2", R) == JetExpression.jet(R, 0, 2)
    assert parse_expr("u3_12", R).max_order() == 12


def test_product_expression():
    e = parse_expr("(u1-u2)^2 * u3_1", R)
    u1, u2 = JetExpression.coord(R, 0), JetExpression.coord(R, 1)
    assert e == (u1 - u2) ** 2 * JetExpression.jet(R, 2, 1)


def test_rational_literals_and_unary_minus():
    assert parse_expr("-1/2*u1 + 3/4", R) == parse_expr("(3 - 2*u1)/4", R)
    assert parse_expr("--u1", R) == parse_expr("u1", R)


def test_negative_exponent_on_point_function():
    assert parse_ratfun("(u1-u2)^-2", R) == parse_ratfun("1/((u1-u2)*(u1-u2))", R)


def test_whitespace_insignificant():
    assert parse_expr(" u1 *\n\tu2_1 ", R) == parse_expr("u1*u2_1", R)


def test_names_context_accepted():
    e = parse_expr("a*b_1", ["a", "b"])
    assert e.max_order() == 1


@pytest.mark.parametrize("src", ["1/(u1_1)", "u1/(u2*u3_2 + 1)", "u1_1^-1"])
def test_jet_denominator_is_semantic_error(src):
    with pytest.raises(SemanticError):
        parse_expr(src, R)


def test_unknown_coordinate():
    with pytest.raises(SemanticError) as exc:
        parse_expr("u1 + v", R)
    assert exc.value.column == 6


def test_division_by_zero():
    with pytest.raises(SemanticError):
        parse_expr("u1/(u2-u2)", R)


@pytest.mark.parametrize("src, line, column", [
    ("u1 +* u2", 1, 5),
    ("(u1 + u2", 1, 9),
    ("u1\n+ )", 2, 3),
    ("u1 $ 2", 1, 4),
    ("", 1, 1),
    ("u1^u2", 1, 4),
])
def test_syntax_error_positions(src, line, column):
    with pytest.raises(ParseError) as exc:
        parse_expr(src, R)
    assert (exc.value.line, exc.value.column) == (line, column)
    assert f"line {line}, column {column}" in str(exc.value)


def test_parse_ratfun_rejects_jets():
    with pytest.raises(SemanticError):
        parse_ratfun("u1_1", R)


def test_format_examples():
    assert format_jet(parse_expr("u1_1 - 2*u2*u1_2^2", R)) in {
        "u1_1 - 2*u2*u1_2^2", "-2*u2*u1_2^2 + u1_1"}
    assert format_jet(parse_expr("0", R)) == "0"
    assert format_ratfun(parse_ratfun("(u1-u2)/(u2-u1)", R)) == "-1"


@given(st.integers(0, 2**32 - 1))
def test_print_parse_round_trip(seed):
    e = random_jet(random.Random(seed), R, order=3, degree=2, terms=4)
    e = e / parse_ratfun("(u1 - u2)^2 + 1", R)
    assert parse_expr(format_jet(e), R) == e


def test_mixed_context_arithmetic():
    with pytest.raises(ContextError):
        parse_expr("u1", R) + parse_expr("x", ["x"])
