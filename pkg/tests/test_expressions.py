"""Expression grammar, printer and calculus"""

import math

import pytest
import sympy as sp

from src.expr import differentiate, evaluate, is_zero_expression, mixed_partial, parse, to_text
from src.models import DomainError, ExpressionSyntaxError, UnboundVariable, Variable

A = Variable("a", 0)
B = Variable("b", 0)


def test_variables_become_real_symbols():
    assert parse("x(a,0)") == A.symbol
    assert A.symbol.is_real


def test_power_binds_tighter_than_unary_minus():
    assert parse("-x(a,0)^2") == -(A.symbol ** 2)


def test_power_tower_is_right_associative():
    assert parse("2^3^2") == 512
    assert parse("2^-1") == sp.Rational(1, 2)


def test_precedence_of_products_and_sums():
    e = parse("1 + 2*x(a,0) - x(b,0)/4")
    assert e == 1 + 2 * A.symbol - B.symbol / 4


def test_functions_and_whitespace():
    e = parse(" sin( x(a,0) ) * cos(x(b,0)) + exp(0) - log(1) ")
    assert e == sp.sin(A.symbol) * sp.cos(B.symbol) + 1


def test_syntax_error_at_end_of_input():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("x(a,0) +")
    assert info.value.offset == len("x(a,0) +")
    assert info.value.expected


def test_syntax_error_reports_offset_of_bad_character():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("x(a,0) ? 1")
    assert info.value.offset == 7


def test_unknown_function_is_rejected():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("tan(x(a,0))")
    assert info.value.offset == 0


def test_non_integer_exponent_is_rejected():
    with pytest.raises(ExpressionSyntaxError):
        parse("x(a,0)^x(b,0)")
    with pytest.raises(ExpressionSyntaxError):
        parse("2^3^-1")


def test_evaluate_binds_by_variable():
    assert evaluate(parse("x(a,0)*x(b,0) + 1"), {A: 2.0, B: 3.0}) == 7.0
    assert evaluate(parse("3"), {}) == 3.0


def test_evaluate_unbound_variable():
    with pytest.raises(UnboundVariable):
        evaluate(parse("x(a,0) + x(b,0)"), {A: 1.0})


@pytest.mark.parametrize(
    "text, value",
    [
        ("log(x(a,0))", -1.0),
        ("log(x(a,0))", 0.0),
        ("1/x(a,0)", 0.0),
        ("exp(x(a,0))", 1000.0),
    ],
)
def test_evaluate_domain_errors(text, value):
    with pytest.raises(DomainError):
        evaluate(parse(text), {A: value})


def test_differentiate_is_exact():
    assert differentiate(parse("x(a,0)^3"), A) == parse("3*x(a,0)^2")
    assert differentiate(parse("x(b,0)"), A) == 0


def test_mixed_partial_is_order_independent():
    e = parse("sin(x(a,0)*x(b,0)) + x(a,0)^2*x(b,0)")
    assert mixed_partial(e, A, B) == mixed_partial(e, B, A)
    assert mixed_partial(e, A, A, B) == sp.diff(e, A.symbol, 2, B.symbol)


def test_is_zero_expression():
    assert is_zero_expression(parse("x(a,0) - x(a,0)"))
    assert is_zero_expression(parse("sin(x(a,0))^2 + cos(x(a,0))^2 - 1"))
    assert not is_zero_expression(parse("x(a,0)*x(b,0)"))


def test_printer_uses_caret_and_coordinate_names():
    assert to_text(parse("x(a,0)^2")) == "x(a,0)^2"


@pytest.mark.parametrize(
    "text",
    [
        "0.5*(x(b,0)-x(a,0))^2 - cos(x(a,0))",
        "1 - cos(x(b,0) - x(a,0)) - 0.25*x(a,0)/x(b,0)",
        "exp(-x(a,0)^2)*log(2 + x(b,0)^2)",
        "-x(a,0)^3 + 2^-2*x(b,0)",
        "x(a,0)^-2 + 1e-5*x(b,0)",
        "exp(1)*x(a,0)",
    ],
)
def test_printed_text_is_a_fixed_point(text):
    e = parse(text)
    again = parse(to_text(e))
    binding = {A: 0.7, B: -1.3}
    assert math.isclose(evaluate(again, binding), evaluate(e, binding), rel_tol=1e-15, abs_tol=1e-15)
    assert to_text(again) == to_text(e)
