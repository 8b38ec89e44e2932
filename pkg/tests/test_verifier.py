from fractions import Fraction

import mpmath
import pytest

from errors import InvalidParameters
from functions import AffineFunction, ExpPolyFunction, parse_expr
from polynomials import Poly
from scalars import FloatScalar, GaussianRational, is_close
from verifier import (
    EXIT_HOLDS,
    EXIT_REGION_LOCAL,
    EXIT_VIOLATED,
    Region,
    SharingProblem,
    VerificationReport,
    align_regimes,
    check_g_constant,
    check_implication_a,
    check_implication_b,
    counting,
    grid_verify_expr,
    g_value,
    h1_degree,
    h2_pole_orders,
    spherical_derivative,
    spherical_scan,
    verify,
)


def family_iv(a=8, C=1):
    return ExpPolyFunction(Fraction(1, 6), Poly((a, -6 * a * C, 6 * a * C * C)))


IV_PROBLEM = SharingProblem(8, -1)


def test_problem_validation():
    with pytest.raises(InvalidParameters):
        SharingProblem(2, 2)
    with pytest.raises(InvalidParameters):
        SharingProblem(0, 1)
    assert SharingProblem(0, 1, relaxed=True).a == 0
    assert SharingProblem(8, -1).expected_g(1) == Fraction(-2, 9)


def test_family_iv_holds_exactly():
    report = verify(family_iv(), IV_PROBLEM)
    assert report.holds
    assert report.exit_code == EXIT_HOLDS
    assert report.witnesses == ()
    assert report.g_constant_estimate == Fraction(-2, 9)
    assert report.g_max_deviation == 0


def test_family_iv_counting_data():
    counts = counting(family_iv(), IV_PROBLEM)
    assert (counts.d, counts.j, counts.k) == (2, 1, 1)
    assert (counts.n_a, counts.nbar_a) == (1, 1)
    assert (counts.n_b_fprime, counts.nbar_b_fprime) == (2, 1)
    assert counts.n_0_fpp == 1
    assert counts.violations() == []


def test_family_iv_for_other_scalings():
    f = family_iv(a=GaussianRational(2, 3), C=Fraction(5, 7))
    prob = SharingProblem(GaussianRational(2, 3), GaussianRational(2, 3) / -8)
    assert verify(f, prob).holds


def test_exponential_polynomial_counterexample_has_witness():
    f = ExpPolyFunction(1, Poly((0, 1, 1)))
    check = check_implication_a(f, SharingProblem(2, 3))
    assert not check.holds
    assert any(w.location == 1 and w.coordinate == "t" for w in check.witnesses)
    report = verify(f, SharingProblem(2, 3))
    assert report.exit_code == EXIT_VIOLATED


def test_second_implication_separately():
    check = check_implication_b(family_iv(), IV_PROBLEM)
    assert check.holds
    assert check.points_checked == 1


def test_affine_solutions():
    assert verify(AffineFunction(2, 5), SharingProblem(2, 1)).holds
    # a constant that is not a is a solution too
    assert verify(AffineFunction(0, 5), SharingProblem(2, 1)).holds


def test_affine_counterexamples():
    report = verify(AffineFunction(3, 0), SharingProblem(2, 1))
    assert not report.holds_a_implies
    assert report.witnesses[0].location == Fraction(2, 3)
    constant_b = verify(AffineFunction(1, 0), SharingProblem(2, 1))
    assert not constant_b.holds_b_implies


def test_float_regime_family_iv():
    f, prob = align_regimes(family_iv(), IV_PROBLEM.to_float(128), 128)
    assert isinstance(f.lam, FloatScalar)
    report = verify(f, prob)
    assert report.holds
    assert is_close(report.g_constant_estimate, GaussianRational(Fraction(-2, 9)).to_float(128), 1e-20)


def test_g_value_degenerate_denominator():
    assert g_value(8, 3, 1, 8, -1) is None
    assert g_value(1, 1, 1, 2, 1) is None
    assert g_value(2, 3, 1, 1, 1) == Fraction(1, 2)


def test_g_is_not_constant_for_non_solutions():
    mean, dev = check_g_constant(ExpPolyFunction(1, Poly((0, 1, 1))), SharingProblem(2, 3), samples=8)
    assert dev > 0


def test_h1_and_h2_for_family_iv():
    assert h1_degree(family_iv(), IV_PROBLEM) == 1
    assert h2_pole_orders(family_iv(), IV_PROBLEM) == [(Fraction(1, 4), 1)]


def test_expression_counterexample_found_by_grid_search():
    report = verify(parse_expr("z^2"), SharingProblem(1, 2), region=Region.square(-2, 2), grid=5)
    assert not report.holds_a_implies
    assert report.exit_code == EXIT_VIOLATED
    assert report.region_local


def test_expression_holds_only_region_locally():
    prob = SharingProblem(-1, 0, relaxed=True)
    report = verify(parse_expr("exp(z^3)-1"), prob, region=Region.square(-1, 1), grid=5)
    assert report.holds
    assert report.exit_code == EXIT_REGION_LOCAL
    assert any("region-local" in w for w in report.warnings)


def test_expression_holds_region_locally_where_exp_underflows():
    # exp(z^3) - 1 sits within 1e-53 of -1 near Re z = -5 without reaching it
    prob = SharingProblem(-1, 0, relaxed=True)
    report = grid_verify_expr(parse_expr("exp(z^3)-1"), prob, Region.square(-5, 5), grid=9)
    assert report.holds
    assert report.witnesses == ()
    assert report.exit_code == EXIT_REGION_LOCAL


def test_spherical_derivative_at_zero_of_exp_z_squared():
    with mpmath.workprec(96):
        z0 = mpmath.sqrt(2 * mpmath.pi) * mpmath.expjpi(mpmath.mpf(1) / 4)
        value = spherical_derivative(parse_expr("exp(z^2)-1"), FloatScalar(z0, 96), 96)
        assert abs(value - 2 * mpmath.fabs(z0)) < mpmath.mpf(10) ** -20


def test_spherical_scan_peak():
    result = spherical_scan(parse_expr("z"), Region.square(-1, 1), grid=3)
    assert result.max_value == 1
    assert result.argmax == 0


def test_region_parsing():
    region = Region.parse("-5,5,-5,5")
    assert region.x_min == -5 and region.y_max == 5
    assert len(region.nodes(3)) == 9
    with pytest.raises(InvalidParameters):
        Region.parse("1,2,3")
    with pytest.raises(InvalidParameters):
        Region.parse("1,0,0,1")
    with pytest.raises(InvalidParameters):
        Region.parse("a,b,c,d")


def test_report_dict_round_trip():
    report = verify(ExpPolyFunction(1, Poly((0, 1, 1))), SharingProblem(2, 3))
    back = VerificationReport.from_dict(report.to_dict())
    assert back.exit_code == report.exit_code
    assert len(back.witnesses) == len(report.witnesses)
    assert back.counts == report.counts


def test_spherical_scan_grows_with_the_square_for_exp_z_squared():
    f = parse_expr("exp(z^2)-1")
    peaks = [spherical_scan(f, Region.square(0, R)).max_value for R in (2, 4, 6)]
    assert peaks[0] < peaks[1] < peaks[2]
    assert peaks[2] > 10


def test_spherical_scan_default_grid_keeps_spacing():
    assert spherical_scan(parse_expr("z"), Region.square(0, 1)).grid == 25
    assert spherical_scan(parse_expr("z"), Region.square(0, 2)).grid == 49


def test_spherical_scan_bounded_for_exponential_family():
    result = spherical_scan(parse_expr("exp(z)"), Region.square(-10, 10), grid=41)
    assert result.max_value <= 1
