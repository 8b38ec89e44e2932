from fractions import Fraction

import pytest

from errors import InvalidParameters, PivotVanished
from functions import ExpPolyFunction, jet_at_t
from polynomials import Poly
from recurrence import (
    AnchorKind,
    JetReport,
    RecurrenceContext,
    all_phases_match,
    fpp_at_simple_b,
    fpp_candidates_at_a,
    jet_extend,
    jet_match,
    jet_report,
    local_expansion_g_limit,
    pivot_C,
    pivot_Ctilde,
    pivot_multiple_b,
    relation_a_from_b,
    seed_at_a,
    seed_at_multiple_b,
    seed_at_simple_b,
    vanishing_pivot_index,
)
from scalars import FloatScalar, GaussianRational
from taylor import Jet

FAMILY_IV = ExpPolyFunction(Fraction(1, 6), Poly((8, -48, 48)))
# e^(-z) + 2 in t = e^(-z): a = 2, b = 1, every b-point of f' simple
FAMILY_III = ExpPolyFunction(-1, Poly((2, 1)))


def test_context_validation():
    with pytest.raises(InvalidParameters):
        RecurrenceContext(8, -1, 0)
    with pytest.raises(InvalidParameters):
        RecurrenceContext(3, 3, 1)
    with pytest.raises(InvalidParameters):
        RecurrenceContext(0, 1, 1)
    assert RecurrenceContext(0, 1, 1, relaxed=True).c == -2
    assert RecurrenceContext(8, -1, 1).c == Fraction(-2, 9)


def test_fpp_candidates_at_a():
    assert fpp_candidates_at_a(RecurrenceContext(8, -1, 1)) == (4, 4)
    assert fpp_candidates_at_a(RecurrenceContext(-9, 1, 1)) == (-3, -6)
    plus, minus = fpp_candidates_at_a(RecurrenceContext(2, 1, 1))
    assert isinstance(plus, FloatScalar) and isinstance(minus, FloatScalar)


def test_fpp_candidates_need_an_a_point():
    with pytest.raises(InvalidParameters):
        fpp_candidates_at_a(RecurrenceContext(8, -1, 1, AnchorKind.AT_SIMPLE_B_POINT))


def test_seeds():
    assert seed_at_a(RecurrenceContext(8, -1, 1), 4).derivs == (8, 8, 4)
    simple = RecurrenceContext(2, 1, 1, AnchorKind.AT_SIMPLE_B_POINT)
    assert fpp_at_simple_b(simple) == -1
    assert seed_at_simple_b(simple).derivs == (1, 1, -1)
    multiple = RecurrenceContext(8, -1, 1, AnchorKind.AT_MULTIPLE_B_POINT)
    assert seed_at_multiple_b(multiple, Fraction(1, 18)).derivs == (-1, -1, 0, Fraction(1, 18))
    with pytest.raises(InvalidParameters):
        seed_at_multiple_b(multiple, 0)


def test_pivots():
    assert pivot_C(2, -6, -9) == 0
    assert pivot_C(3, 4, 8) == -8
    assert pivot_Ctilde(2, RecurrenceContext(2, 1, 1, AnchorKind.AT_SIMPLE_B_POINT)) == -3
    multiple = RecurrenceContext(8, -1, 2, AnchorKind.AT_MULTIPLE_B_POINT)
    assert pivot_multiple_b(3, multiple) == 0
    assert pivot_multiple_b(2, multiple) == -1
    with pytest.raises(InvalidParameters):
        pivot_C(1, 1, 1)


def test_a_point_jet_matches_family_iv():
    ctx = RecurrenceContext(8, -1, 1)
    jet = jet_extend(seed_at_a(ctx, 4), ctx, 12)
    assert jet.order == 12
    assert jet_match(jet, jet_at_t(FAMILY_IV, 1, 12), 12)


def test_double_b_point_jet_matches_family_iv():
    ctx = RecurrenceContext(8, -1, 1, AnchorKind.AT_MULTIPLE_B_POINT)
    oracle = jet_at_t(FAMILY_IV, Fraction(1, 4), 10)
    assert oracle.derivs[3] == Fraction(1, 18)
    jet = jet_extend(seed_at_multiple_b(ctx, Fraction(1, 18)), ctx, 10)
    assert jet_match(jet, oracle, 10)


def test_simple_b_point_jet_matches_shifted_exponential():
    ctx = RecurrenceContext(2, 1, 1, AnchorKind.AT_SIMPLE_B_POINT)
    oracle = jet_at_t(FAMILY_III, -1, 9)
    jet = jet_extend(seed_at_simple_b(ctx), ctx, 9)
    assert jet.derivs == oracle.derivs
    assert jet.derivs[1:] == tuple(GaussianRational((-1) ** (n + 1)) for n in range(1, 10))


def test_vanishing_pivot_is_raised():
    ctx = RecurrenceContext(-9, 1, 1)
    _, minus = fpp_candidates_at_a(ctx)
    with pytest.raises(PivotVanished) as info:
        jet_extend(seed_at_a(ctx, minus), ctx, 6)
    assert info.value.n == 2
    assert info.value.k == 1
    # the other branch extends fine
    plus, _ = fpp_candidates_at_a(ctx)
    assert jet_extend(seed_at_a(ctx, plus), ctx, 6).order == 6


def test_relation_solver():
    assert relation_a_from_b(2, 1, 1) == -9
    assert vanishing_pivot_index(-9, 1, 1) == 2
    assert vanishing_pivot_index(relation_a_from_b(5, 3, 2), 2, 3) == 5
    assert vanishing_pivot_index(8, -1, 1) is None
    assert vanishing_pivot_index(-8, 1, 1) is None


def test_seed_contract_is_checked():
    ctx = RecurrenceContext(8, -1, 1)
    with pytest.raises(InvalidParameters):
        jet_extend(Jet(0, (8, 7, 4)), ctx, 5)
    with pytest.raises(InvalidParameters):
        jet_extend(Jet(0, (8, 8, 5)), ctx, 5)
    with pytest.raises(InvalidParameters):
        jet_extend(seed_at_a(ctx, 4), ctx, 1)


def test_float_branch_extends():
    ctx = RecurrenceContext(2, 1, 1)
    plus, _ = fpp_candidates_at_a(ctx)
    jet = jet_extend(seed_at_a(ctx, plus), ctx, 6)
    assert jet.regime.value == "float"
    assert jet.order == 6


def test_local_expansion_limit():
    assert local_expansion_g_limit(8, -1, 1, 3) == Fraction(-2, 9)
    assert local_expansion_g_limit(5, 2, 3, GaussianRational(1, 1)) == Fraction(8, 3)


def test_phase_lattice():
    assert all_phases_match(3)
    assert all_phases_match(1)
    assert not all_phases_match(2)
    assert not all_phases_match(Fraction(1, 3))


def test_jet_report_flags_first_mismatch():
    ctx = RecurrenceContext(8, -1, 1)
    truth = jet_at_t(FAMILY_IV, 1, 6)
    tampered = Jet(truth.anchor, truth.derivs[:3] + (truth.derivs[3] + 1,) + truth.derivs[4:])
    report = jet_report(seed_at_a(ctx, 4), ctx, 6, tampered)
    assert report.first_mismatch == 3
    assert report.matches is False
    good = jet_report(seed_at_a(ctx, 4), ctx, 6, truth)
    assert good.matches is True
    back = JetReport.from_dict(good.to_dict())
    assert back.matches is True
    assert back.jet == good.jet
