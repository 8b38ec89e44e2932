import pytest
from hypothesis import given, strategies as st

from errors import NonEntire, ParseError
from expressions import Exp, Pow, evaluate, parse, to_source
from scalars import FloatScalar, GaussianRational, is_close
from taylor import TaylorSeries


def test_precedence_and_associativity():
    assert evaluate(parse("1+2*3"), GaussianRational(0)) == 7
    assert evaluate(parse("2^3^2"), GaussianRational(0)) == 512
    assert evaluate(parse("-z^2"), GaussianRational(3)) == -9
    assert evaluate(parse("(1+i)*(1-i)"), GaussianRational(0)) == 2


def test_exp_node():
    node = parse("exp(z^3)-1")
    assert isinstance(node.left, Exp)
    assert isinstance(node.left.arg, Pow)
    assert evaluate(node, GaussianRational(0)) == 0
    value = evaluate(node, GaussianRational(1), 96)
    assert isinstance(value, FloatScalar)


def test_imaginary_literals():
    assert evaluate(parse("3i"), GaussianRational(0)) == GaussianRational(0, 3)
    assert evaluate(parse("2*i*z"), GaussianRational(1)) == GaussianRational(0, 2)


def test_constant_division_and_negative_constant_power():
    assert evaluate(parse("z/4"), GaussianRational(2)) == GaussianRational(1, 0) / 2
    assert evaluate(parse("z*2^(-1)"), GaussianRational(2)) == 1


@pytest.mark.parametrize("source", ["1/z", "z^(-1)", "z^z", "z^(1/2)", "1/(2-2)", "0^(-1)"])
def test_non_entire_inputs(source):
    with pytest.raises(NonEntire):
        parse(source)


@pytest.mark.parametrize(
    "source,offset",
    [("z+", 2), ("sin(z)", 0), ("z $ 1", 2), ("exp z", 4), ("(z", 2)],
)
def test_parse_errors_carry_offsets(source, offset):
    with pytest.raises(ParseError) as info:
        parse(source)
    assert info.value.offset == offset


def test_parse_error_lists_expected_tokens():
    with pytest.raises(ParseError) as info:
        parse("z+")
    assert "z" in info.value.expected
    assert "(" in info.value.expected


@pytest.mark.parametrize(
    "source",
    ["z^2-2*z+1", "-(z+1)^2", "exp(-z)*(z-1)", "1-(2-z)", "z/(3*2)", "(-z)^3", "exp(exp(z))"],
)
def test_printer_reparses_to_same_tree(source):
    tree = parse(source)
    assert parse(to_source(tree)) == tree


def test_series_propagation_of_polynomial():
    series = evaluate(parse("z^3-2*z"), TaylorSeries.variable(GaussianRational(1), 4))
    assert series.derivatives() == (-1, 1, 6, 6, 0)


@given(st.integers(min_value=-5, max_value=5), st.integers(min_value=-5, max_value=5))
def test_series_value_matches_point_value(re, im):
    node = parse("(z+1)^3 - i*z^2 + 7")
    z0 = GaussianRational(re, im)
    series = evaluate(node, TaylorSeries.variable(z0, 3))
    assert series.coeffs[0] == evaluate(node, z0)


def test_exp_series_derivatives():
    series = evaluate(parse("exp(2*z)"), TaylorSeries.variable(GaussianRational(0), 4), 128)
    for n, d in enumerate(series.derivatives()):
        assert is_close(d, FloatScalar.from_parts(2**n, 0, 128), 1e-30)
