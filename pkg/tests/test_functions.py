from fractions import Fraction

import mpmath
import pytest

from errors import DegenerateCandidate, InvalidParameters, ZeroLambda
from expressions import to_source
from functions import (
    AffineFunction,
    Candidate,
    ExpPolyFunction,
    dump_candidate,
    dz_derive,
    evaluate,
    fundamental_period,
    jet_at_t,
    jet_of,
    jet_via_series,
    load_candidate,
    parse_expr,
    scalar_field,
    to_expr,
    z_from_t,
)
from polynomials import Poly
from scalars import FloatScalar, GaussianRational, is_close

SIXTH = Fraction(1, 6)


def family_iv(a=8, C=1):
    return ExpPolyFunction(SIXTH, Poly((a, -6 * a * C, 6 * a * C * C)))


def test_dz_keeps_degree_and_kills_constant():
    p = Poly((8, -48, 48))
    assert dz_derive(p, SIXTH) == Poly((0, -8, 16))
    assert dz_derive(dz_derive(p, SIXTH), SIXTH) == Poly((0, Fraction(-4, 3), Fraction(16, 3)))
    assert dz_derive(Poly((5,)), SIXTH).is_zero


def test_dz_needs_nonzero_lambda():
    with pytest.raises(ZeroLambda):
        dz_derive(Poly((0, 1)), 0)


def test_exppoly_validation():
    with pytest.raises(ZeroLambda):
        ExpPolyFunction(0, Poly((0, 1)))
    with pytest.raises(DegenerateCandidate):
        ExpPolyFunction(1, Poly((3,)))


def test_family_iv_jet_at_a_point_is_exact():
    jet = jet_at_t(family_iv(), 1, 4)
    assert jet.anchor == 0
    assert jet.derivs[:3] == (8, 8, 4)
    assert jet.regime.value == "exact"


def test_family_iv_third_derivative_at_double_b_point():
    f = family_iv()
    jet = jet_at_t(f, Fraction(1, 4), 3)
    assert jet.derivs == (-1, -1, 0, Fraction(1, 18))
    assert not isinstance(jet.anchor, GaussianRational)


def test_jet_routes_agree():
    f = family_iv()
    z0 = GaussianRational(Fraction(1, 3), Fraction(1, 2))
    direct = jet_of(f, z0, 6, 128)
    generic = jet_via_series(f, z0, 6, 128)
    assert direct.first_mismatch(generic, 1e-28) is None


def test_affine_jet_and_evaluation():
    f = AffineFunction(3, -1)
    assert evaluate(f, 2) == 5
    assert jet_of(f, 2, 3).derivs == (5, 3, 0, 0)
    assert jet_of(f, 2, 0).derivs == (5,)


def test_expr_jet():
    jet = jet_of(parse_expr("z^3 + 2*z"), 1, 4)
    assert jet.derivs == (3, 5, 6, 6, 0)


def test_jet_order_must_be_non_negative():
    with pytest.raises(InvalidParameters):
        jet_of(AffineFunction(1, 0), 0, -1)


def test_to_expr_round_trip_values():
    f = ExpPolyFunction(2, Poly((1, 0, 3)))
    node = to_expr(f)
    g = parse_expr(to_source(node))
    z = GaussianRational(Fraction(1, 5))
    assert is_close(evaluate(f, z, 96), evaluate(g, z, 96), 1e-25)


def test_period_and_principal_z():
    f = ExpPolyFunction(SIXTH, Poly((0, 1)))
    period = fundamental_period(f, 96)
    with mpmath.workprec(96):
        assert abs(period.value - 12j * mpmath.pi) < mpmath.mpf(10) ** -25
    z = z_from_t(f, -1, 96)
    assert is_close(z, FloatScalar.from_parts(0, 6 * mpmath.pi, 96), 1e-25)
    assert z_from_t(f, 1) == 0
    with pytest.raises(InvalidParameters):
        z_from_t(f, 0)


def test_candidate_document_round_trip(tmp_path):
    cand = Candidate(family_iv(), GaussianRational(8), GaussianRational(-1))
    path = tmp_path / "iv.json"
    dump_candidate(cand, path)
    assert load_candidate(path) == cand


def test_candidate_document_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{oops", encoding="utf-8")
    with pytest.raises(InvalidParameters):
        load_candidate(path)
    with pytest.raises(InvalidParameters):
        Candidate.from_dict({"kind": "exppoly", "lambda": "1"})
    with pytest.raises(InvalidParameters):
        Candidate.from_dict({"kind": "spline"})


def test_scalar_field_accepts_json_numbers():
    assert scalar_field(8) == 8
    assert scalar_field(0.125) == Fraction(1, 8)
    assert scalar_field("-1/8") == Fraction(-1, 8)
    with pytest.raises(InvalidParameters):
        scalar_field(True)
