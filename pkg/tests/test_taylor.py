import math
from fractions import Fraction

import mpmath
import pytest

from errors import InvalidParameters
from scalars import FloatScalar, GaussianRational, is_close
from taylor import Jet, TaylorSeries, exact_fraction


def test_product_rule_on_polynomials():
    z = TaylorSeries.variable(2, 4)
    p = z * z * z
    # z^3 at 2: 8, 12, 12, 6, 0
    assert p.derivatives() == (8, 12, 12, 6, 0)


def test_power_matches_repeated_product():
    z = TaylorSeries.variable(GaussianRational(1, 1), 5)
    assert z**4 == z * z * z * z


def test_exp_of_identity_has_unit_derivatives():
    s = TaylorSeries.variable(0, 6).exp(96)
    derivs = s.derivatives()
    assert derivs[0] == 1
    for d in derivs[1:]:
        assert is_close(d, FloatScalar.from_parts(1, 0, 96), 1e-25)


def test_exp_of_shifted_series():
    s = (TaylorSeries.variable(0, 5) * 2).exp(128)
    for n, d in enumerate(s.derivatives()):
        assert is_close(d, FloatScalar.from_parts(2**n, 0, 128), 1e-30)


def test_division_only_by_constants():
    z = TaylorSeries.variable(0, 3)
    assert (z / 2).coeffs[1] == Fraction(1, 2)
    with pytest.raises(InvalidParameters):
        z / z


def test_negative_power_is_rejected():
    with pytest.raises(InvalidParameters):
        TaylorSeries.variable(0, 2) ** -1


def test_jet_and_taylor_coefficients():
    jet = Jet(0, (1, 1, 2, 6, 24))
    assert jet.taylor_coefficients() == (1, 1, 1, 1, 1)
    assert jet.truncate(2).derivs == (1, 1, 2)
    with pytest.raises(InvalidParameters):
        jet.truncate(7)


def test_first_mismatch_compares_common_orders():
    exact = Jet(0, (1, 2, 3, 4))
    with mpmath.workprec(128):
        near = Jet(0, tuple(FloatScalar.from_parts(v, 0, 128) for v in (1, 2, mpmath.mpf(3) + mpmath.mpf(10) ** -30)))
    assert exact.first_mismatch(near, 1e-24) is None
    assert exact.first_mismatch(Jet(0, (1, 2, 5)), 1e-24) == 2


def test_jet_dict_round_trip_keeps_anchor_t():
    jet = Jet(GaussianRational(0, 3), (8, 8, 4), anchor_t=GaussianRational(1))
    back = Jet.from_dict(jet.to_dict())
    assert back == jet
    assert back.anchor_t == 1


def test_exact_fraction():
    assert exact_fraction(GaussianRational(Fraction(-1, 8))) == Fraction(-1, 8)
    with pytest.raises(InvalidParameters):
        exact_fraction(GaussianRational(0, 1))
    with pytest.raises(InvalidParameters):
        exact_fraction(FloatScalar.from_parts(math.pi))
