import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import XBETA, XDELTA
from focalcong.chart import (
    PlaneChart,
    Sampling,
    eval_frame,
    format_chart,
    parse_chart,
    parse_expr,
    validate_chart,
)
from focalcong.errors import (
    ChartSyntaxError,
    DegenerateCongruence,
    DegenerateSpanAtBase,
    UnknownVariable,
    ZeroPointMap,
)
from focalcong.exact import Jet2, mat_rank
from focalcong.poly import U, V, Poly, poly_to_jet


def chart_text(*points):
    return "vars: u v\n" + "".join(f"point: [{p}]\n" for p in points)


# -- polynomials ------------------------------------------------------------------


def test_poly_to_jet_examples():
    assert poly_to_jet(U**2 + V, (1, 1)) == Jet2(2, 2, 1, 1, 0, 0)
    assert poly_to_jet(Poly.const(7), (3, -2)) == Jet2(7)
    assert poly_to_jet(U * V, (2, 3)) == Jet2(6, 3, 2, 0, 1, 0)


polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.fractions(min_value=-9, max_value=9, max_denominator=5),
    max_size=6,
).map(Poly)
bases = st.tuples(
    st.fractions(min_value=-5, max_value=5, max_denominator=4),
    st.fractions(min_value=-5, max_value=5, max_denominator=4),
)


@given(polys, polys, bases)
def test_product_rule(p, q, base):
    assert poly_to_jet(p * q, base) == poly_to_jet(p, base) * poly_to_jet(q, base)


@settings(max_examples=50)
@given(polys, bases)
def test_jet_matches_symbolic_derivatives(p, base):
    u, v = sympy.symbols("u v")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * u**i * v**j for (i, j), c in p.terms.items())
    at = {u: sympy.Rational(base[0].numerator, base[0].denominator),
          v: sympy.Rational(base[1].numerator, base[1].denominator)}
    jet = poly_to_jet(p, base)
    expect = [
        expr, sympy.diff(expr, u), sympy.diff(expr, v),
        sympy.diff(expr, u, 2), sympy.diff(expr, u, v), sympy.diff(expr, v, 2),
    ]
    got = [jet.value, jet.du, jet.dv, jet.duu, jet.duv, jet.dvv]
    for e, g in zip(expect, got):
        assert sympy.Rational(g.numerator, g.denominator) == sympy.sympify(e).subs(at)


def test_compose_substitutes():
    p = U**2 + V
    assert p.compose(U + 1, U * V) == U**2 + 2 * U + 1 + U * V


def test_printer_is_degree_lex():
    assert str(U * V * Fraction(3, 2) - V) == "3/2*u*v - v"
    assert str(V**2 + U**2 + U * V) == "u^2 + u*v + v^2"
    assert str(-U + 1) == "-u + 1"


# -- parsing ----------------------------------------------------------------------


def test_parse_point_map():
    chart = parse_chart(XBETA)
    assert chart.points[0] == (Poly.const(1), U, U**2, V, V**2)


def test_parse_rational_coefficient():
    chart = parse_chart(chart_text("3/2*u*v - v, 0, 0, 0, 1", "1, 0, 0, 0, 0", "0, 1, 0, 0, 0"))
    assert chart.points[0][0] == Fraction(3, 2) * U * V - V


def test_unknown_variable():
    with pytest.raises(UnknownVariable) as info:
        parse_chart(chart_text("1, w, 0, 0, 0", "1, 0, 0, 0, 0", "0, 1, 0, 0, 0"))
    assert info.value.name == "w"
    assert (info.value.line, info.value.col) == (2, 12)


def test_zero_point_map():
    with pytest.raises(ZeroPointMap):
        parse_chart(chart_text("0, 0, 0, 0, 0", "1, 0, 0, 0, 0", "0, 1, 0, 0, 0"))


@pytest.mark.parametrize(
    "text",
    [
        "point: [1, 0, 0, 0, 0]\npoint: [0, 1, 0, 0, 0]\npoint: [0, 0, 1, 0, 0]\n",
        chart_text("1, 0, 0, 0", "1, 0, 0, 0, 0", "0, 1, 0, 0, 0"),
        chart_text("1, 0, 0, 0, 0", "0, 1, 0, 0, 0"),
        chart_text("(u + 1, 0, 0, 0, 0", "1, 0, 0, 0, 0", "0, 1, 0, 0, 0"),
        chart_text("u^v, 0, 0, 0, 1", "1, 0, 0, 0, 0", "0, 1, 0, 0, 0"),
        chart_text("1/0, 0, 0, 0, 1", "1, 0, 0, 0, 0", "0, 1, 0, 0, 0"),
        "vars: u v\nbogus: 1\n",
    ],
)
def test_syntax_errors(text):
    with pytest.raises(ChartSyntaxError):
        parse_chart(text)


def test_expression_grammar():
    assert parse_expr("(u + 1)^2 - 2*u") == U**2 + 1
    assert parse_expr("-u*v + 1/3") == -U * V + Fraction(1, 3)
    with pytest.raises(ChartSyntaxError):
        parse_expr("u +")


def test_expect_and_comments():
    chart = parse_chart("# a comment\n" + XDELTA + "expect: Delta\n")
    assert chart.expected == "Delta"


coords = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-5, 5), min_size=1, max_size=4
).map(Poly).filter(lambda p: not p.is_zero())


@given(st.lists(coords, min_size=15, max_size=15))
def test_print_parse_round_trip(cs):
    chart = PlaneChart((tuple(cs[:5]), tuple(cs[5:10]), tuple(cs[10:])))
    text = format_chart(chart)
    again = parse_chart(text)
    assert again == chart
    assert format_chart(again) == text


# -- frames -----------------------------------------------------------------------


def _same_span(a, b):
    return mat_rank(a) == mat_rank(b) == mat_rank(list(a) + list(b))


def test_delta_frame_duals():
    frame = eval_frame(parse_chart(XDELTA), (1, 1))
    duals = [[x.value for x in n] for n in frame.duals]
    assert _same_span(duals, [(0, 0, 1, -1, 0), (0, 0, 1, 0, -1)])


def test_beta_frame_duals():
    frame = eval_frame(parse_chart(XBETA), (1, 1))
    duals = [[x.value for x in n] for n in frame.duals]
    assert _same_span(duals, [(1, -2, 1, 0, 0), (1, 0, 0, -2, 1)])


@pytest.mark.parametrize("text", [XBETA, XDELTA])
def test_duals_annihilate_full_jets(text):
    frame = eval_frame(parse_chart(text), (Fraction(2, 3), Fraction(-5, 2)))
    for n in frame.duals:
        for p in frame.spanning:
            assert sum((a * b for a, b in zip(n, p)), Jet2(0)).is_zero()


def test_repeated_point_is_degenerate():
    chart = parse_chart(chart_text("1, u, 0, 0, 0", "1, u, 0, 0, 0", "0, 0, 1, 0, 0"))
    with pytest.raises(DegenerateSpanAtBase):
        eval_frame(chart, (1, 1))


# -- validation -------------------------------------------------------------------


def test_validate_examples():
    for text in (XBETA, XDELTA):
        result = validate_chart(parse_chart(text))
        assert result.ok and result.realization_dim == 4


def test_planes_in_a_hyperplane_are_degenerate():
    chart = parse_chart(chart_text("1, u, 0, 0, 0", "0, 0, 1, v, 0", "0, 1, 0, u*v, 0"))
    with pytest.raises(DegenerateCongruence) as info:
        validate_chart(chart)
    assert info.value.realization_dim <= 3
    assert not validate_chart(chart, strict=False).ok


def test_validate_invariant_under_reparametrization():
    from focalcong.generators import Reparametrize, transform_chart

    chart = parse_chart(XBETA)
    moved = transform_chart(chart, Reparametrize(((2, 1), (1, -1)), (3, 0)))
    assert validate_chart(moved, Sampling(seed=4)).realization_dim == 4
