from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cryvol.ct import (
    CTExpression,
    LinearForm,
    build_cry_lhs,
    build_cryc_lhs,
    build_cryd_lhs,
    build_kdyn_coeff_expr,
    build_kdyn_reduced_expr,
    build_morris_lhs,
    build_thmC_lhs,
    format_expression,
    gbinom,
    iterated_ct,
    iterated_ct_series,
    parse_expression,
    verify_identity,
)
from cryvol.dynflow import kdyn
from cryvol.graphs import fig2_graph, make_complete_C
from oracles import laurent_ct_one_variable

HALF = Fraction(1, 2)


def test_gbinom_negative_exponent():
    assert gbinom(-1, 3) == -1
    assert gbinom(-2, 3) == -4
    assert gbinom(5, 2) == 10
    assert gbinom(2, 3) == 0


def test_normalization_uses_dominant_term():
    s, L = LinearForm.make(0, [3, -2]).normalized()
    assert s == -2 and L == LinearForm.make(0, [Fraction(-3, 2), 1])
    s, L = LinearForm.make(2, [4]).normalized()
    assert s == 2 and L == LinearForm.make(1, [2])


def test_zero_form_to_negative_power():
    with pytest.raises(ZeroDivisionError):
        CTExpression.product(("x1",), forms=[(LinearForm.make(0, [0]), -1)])


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4), st.integers(0, 5), st.integers(1, 4))
def test_one_variable_against_series_oracle(numer, pole, power):
    # x^-pole (1 - x)^-power * sum numer[k] x^k, as a sum of monomial terms
    expr = None
    for k, c in enumerate(numer):
        t = CTExpression.product(("x1",), c, [k - pole], [(LinearForm.make(1, [-1]), -power)])
        expr = t if expr is None else expr + t
    assert iterated_ct(expr) == laurent_ct_one_variable(numer, pole, power)


@pytest.mark.parametrize("n,value", [(0, 1), (1, 1), (2, 2), (3, 10), (4, 140)])
def test_catalan_product_identity(n, value):
    assert iterated_ct(build_cry_lhs(n)) == value


@pytest.mark.parametrize("n,value", [(1, 1), (2, 2), (3, 32), (4, 5120)])
def test_type_D_expression(n, value):
    assert iterated_ct(build_cryd_lhs(n)) == value


@pytest.mark.parametrize("n,value", [(1, 1), (2, 4), (3, 128), (4, 40960)])
def test_type_C_expressions(n, value):
    assert iterated_ct(build_cryc_lhs(n)) == value
    assert iterated_ct(build_kdyn_reduced_expr(n)) == value


def test_morris_examples():
    assert iterated_ct(build_morris_lhs(n=1, a=3, b=2, c=HALF)) == 6
    assert verify_identity("morris", n=3, a=2, b=1, c=1).equal


def test_thmC_examples():
    assert iterated_ct(build_thmC_lhs(n=1, a=2, b=0, c=HALF)) == 2
    assert iterated_ct(build_thmC_lhs(n=2, a=2, b=0, c=HALF)) == 32
    assert iterated_ct(build_thmC_lhs(n=2, a=2, b=1, c=HALF)) == 128


def test_difference_sign_convention():
    # only the larger-minus-smaller difference reproduces the closed form
    good = ("CT[x2,x1] x1^-1 * x2^-1 * (1 - x1)^-2 * (1 - x2)^-2 * (x2 - x1)^-1"
            " * (1 - x1 - x2)^-1")
    bad = good.replace("(x2 - x1)", "(x1 - x2)")
    assert iterated_ct(parse_expression(good)) == 32
    assert iterated_ct(parse_expression(bad)) == -32


def test_integer_a_required():
    with pytest.raises(ValueError):
        build_morris_lhs(n=1, a=HALF, b=0, c=1)


def test_unknown_identity():
    with pytest.raises(ValueError):
        verify_identity("nope", n=1)


def test_generating_series_coefficient():
    assert iterated_ct(build_kdyn_coeff_expr(fig2_graph(), (2, 1, 1))) == 17
    KC = make_complete_C(4)
    assert iterated_ct(build_kdyn_coeff_expr(KC, (0, 0, 1, 2))) == kdyn(KC, (0, 0, 1, 2))


def test_text_roundtrip():
    for expr in (build_cryc_lhs(3), build_thmC_lhs(n=2, a=1, b=2, c=1), build_kdyn_coeff_expr(fig2_graph(), (2, 1, 1))):
        text = format_expression(expr)
        back = parse_expression(text)
        assert back == expr
        assert iterated_ct(back) == iterated_ct(expr)


def test_parse_example():
    expr = parse_expression("CT[x2,x1] x1^-1 * (1 - x1)^-2 * (x2 - x1)^-1")
    assert expr.variables == ("x1", "x2")
    assert iterated_ct(expr) == iterated_ct_series(expr)


@pytest.mark.parametrize("text", ["CT[x1] x3^-1", "x1^-1", "CT[x1] (1 - )^-1", "CT[x1] x1^q"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_expression(text)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 2), st.integers(1, 2), st.integers(0, 2), st.sampled_from([HALF, Fraction(1)]))
def test_series_backend_agrees(n, a, b, c):
    expr = build_morris_lhs(n=n, a=a, b=b, c=c)
    assert iterated_ct_series(expr) == iterated_ct(expr)


def test_series_backend_on_larger_expressions():
    assert iterated_ct_series(build_kdyn_coeff_expr(fig2_graph(), (2, 1, 1))) == 17
    assert iterated_ct_series(build_cryc_lhs(3)) == 128
