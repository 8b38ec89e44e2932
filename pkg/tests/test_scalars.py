from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from errors import InvalidParameters, MixedRegime
from scalars import (
    I,
    EisensteinRational,
    FloatScalar,
    GaussianRational,
    Regime,
    common_regime,
    exp_scalar,
    is_close,
    parse_scalar,
    promote,
    sqrt_scalar,
)

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000)
gaussians = st.builds(GaussianRational, fractions, fractions)


def test_i_squared_is_minus_one():
    assert I * I == -1
    assert (GaussianRational(3, 4) * GaussianRational(3, -4)) == 25


@given(gaussians, gaussians)
def test_exact_field_operations(x, y):
    assert x + y - y == x
    assert x * y == y * x
    if y:
        assert (x / y) * y == x


@given(gaussians)
def test_norm_is_product_with_conjugate(x):
    assert x * x.conjugate() == GaussianRational(x.norm())


def test_exact_sqrt():
    assert GaussianRational(-4).sqrt() == GaussianRational(0, 2)
    assert GaussianRational(3, 4).sqrt() == GaussianRational(2, 1)
    assert GaussianRational(2).sqrt() is None


def test_sqrt_demotes_when_irrational(caplog):
    root, demoted = sqrt_scalar(2, 96)
    assert demoted
    assert isinstance(root, FloatScalar)
    assert is_close(root * root, FloatScalar.from_parts(2, 0, 96), 1e-25)
    assert "demoting" in caplog.text


def test_float_and_exact_do_not_mix_silently():
    with pytest.raises(MixedRegime):
        GaussianRational(1) + FloatScalar.from_parts(1)
    with pytest.raises(MixedRegime):
        common_regime(GaussianRational(1), FloatScalar.from_parts(1))


def test_promote_demotes_exact_side():
    x, y = promote(GaussianRational(Fraction(1, 3)), FloatScalar.from_parts(1, 0, 80))
    assert isinstance(x, FloatScalar) and x.precision_bits == 80
    assert y.regime is Regime.FLOAT


def test_eisenstein_generator_relation():
    w = EisensteinRational.generator()
    assert w * w == w - 1
    assert w**6 == 1
    assert w * w.conjugate() == EisensteinRational(w.norm())


def test_eisenstein_embedding():
    w = EisensteinRational.generator().to_float(100)
    with mpmath.workprec(100):
        assert abs(w.value * w.value - (w.value - 1)) < mpmath.mpf(2) ** -90


def test_real_gaussian_times_eisenstein_stays_eisenstein():
    product = GaussianRational(2) * EisensteinRational(0, 1)
    assert product == EisensteinRational(0, 2)
    with pytest.raises(MixedRegime):
        GaussianRational(0, 1) * EisensteinRational(0, 1)


def test_exp_stays_exact_only_at_zero():
    assert exp_scalar(0) == 1
    e = exp_scalar(1, 64)
    assert isinstance(e, FloatScalar)
    assert is_close(e, FloatScalar.from_parts(mpmath.e, 0, 64), 1e-15)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("8", GaussianRational(8)),
        ("-1/8", GaussianRational(Fraction(-1, 8))),
        ("0.25", GaussianRational(Fraction(1, 4))),
        ("3-4i", GaussianRational(3, -4)),
        ("-i", GaussianRational(0, -1)),
        ("1/2i", GaussianRational(0, Fraction(1, 2))),
        ("1/2-3/4*i", GaussianRational(Fraction(1, 2), Fraction(-3, 4))),
        ("-1/1+1/1*w", EisensteinRational(-1, 1)),
    ],
)
def test_parse_scalar_literals(text, expected):
    assert parse_scalar(text) == expected


@given(gaussians)
def test_exact_serialization_reads_back(x):
    assert parse_scalar(x.serialize()) == x


def test_float_serialization_keeps_precision():
    x = FloatScalar.from_parts(mpmath.mpf(1) / 3, -2, 96)
    back = parse_scalar(x.serialize())
    assert isinstance(back, FloatScalar)
    assert back.precision_bits == 96
    assert is_close(back, x, 1e-25)


def test_parse_rejects_garbage():
    with pytest.raises(InvalidParameters):
        parse_scalar("eight")


def test_float_precision_floor():
    with pytest.raises(InvalidParameters):
        FloatScalar(mpmath.mpc(1), 1)
