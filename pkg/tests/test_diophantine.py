from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from diophantine import (
    FUNDAMENTAL_UNIT_3,
    PellInstance,
    QuadraticInteger,
    descent_step,
    diff_squares,
    diff_squares_k3,
    dj_equation_check,
    dj_equation_sweep,
    is_square,
    k2_pell_instance,
    mnk_closed_argument,
    mnk_feasible,
    mod_sieve_k4,
    pell_descent,
    pivot_nonvanishing_certificates,
    residue_sieve,
    square_family_scan,
    square_family_value,
    zsqrt3_mul,
    zsqrt3_norm,
)
from errors import InvalidParameters, InvalidUnit


@given(st.integers(min_value=0, max_value=10**12))
def test_is_square_agrees_with_squaring(n):
    assert is_square(n * n)
    assert is_square(n * n + 1) == (n == 0)


def test_negative_is_not_square():
    assert not is_square(-4)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_no_squares_for_small_k(k):
    assert square_family_scan(k, 10**6) == []


def test_scan_finds_squares_for_k1():
    # 2 * 2^2 + 1 = 9
    assert square_family_value(1, 1) == 9
    assert 1 in square_family_scan(1, 10)


def test_scan_validates_ranges():
    with pytest.raises(InvalidParameters):
        square_family_scan(0, 10)
    with pytest.raises(InvalidParameters):
        square_family_scan(2, 0)


def test_mod9_sieve_for_k4():
    sieve = mod_sieve_k4()
    assert sieve.value_residues == {2, 3, 5, 8}
    assert sieve.square_residues == {0, 1, 4, 7}
    assert sieve.disjoint
    assert not residue_sieve(1, 9).disjoint


def test_difference_of_squares_for_k3():
    result = diff_squares_k3()
    assert result.divisor_pairs == ((17, 1),)
    assert result.solutions == ((9, 8, 0),)
    assert result.positive_n_solutions == ()


def test_difference_of_squares_general():
    # x^2 - y^2 = 15 with x = 2n + 4: (8, 7) gives n = 2, (4, 1) gives n = 0
    result = diff_squares(15, 4, 2)
    assert set(result.solutions) == {(8, 7, 2), (4, 1, 0)}
    assert result.positive_n_solutions == ((8, 7, 2),)


def test_ring_arithmetic():
    assert zsqrt3_mul(QuadraticInteger(5, 2), QuadraticInteger(7, -4)) == QuadraticInteger(11, -6)
    assert zsqrt3_norm(FUNDAMENTAL_UNIT_3) == 1
    assert FUNDAMENTAL_UNIT_3**2 == QuadraticInteger(7, 4)
    assert QuadraticInteger(7, 4).upper_bound() == 14
    assert QuadraticInteger(2, 0).upper_bound() == 2
    with pytest.raises(InvalidParameters):
        QuadraticInteger(1, 1, 3) * QuadraticInteger(1, 1, 5)


@given(st.integers(min_value=-200, max_value=200), st.integers(min_value=-200, max_value=200))
def test_descent_step_preserves_norm(x, y):
    nx, ny = descent_step(x, y, QuadraticInteger(7, 4))
    assert nx * nx - 3 * ny * ny == x * x - 3 * y * y


def test_k2_pell_certificate():
    solutions, cert = pell_descent(k2_pell_instance())
    assert solutions == []
    assert cert.closure_check
    assert cert.closure_modulus == 12
    assert cert.bound_check
    assert cert.bound_detail == "51^2 = 2601 > 14^2*13 = 2548"
    assert cert.complete
    assert cert.to_dict()["closure_check"] == "pass"


def test_unconstrained_norm_13():
    solutions, _ = pell_descent(PellInstance(D=3, N=13))
    assert {(4, 1), (5, 2), (11, 6), (16, 9)} <= set(solutions)


def test_norm_one_solutions_and_failed_bound():
    solutions, cert = pell_descent(PellInstance(D=3, N=1, bound=14))
    assert solutions == [(2, 1), (7, 4)]
    assert not cert.bound_check
    assert not cert.complete


def test_pell_instance_validation():
    with pytest.raises(InvalidParameters):
        PellInstance(D=4, N=13)
    with pytest.raises(InvalidParameters):
        PellInstance(D=3, N=13, bound=3)
    with pytest.raises(InvalidParameters):
        PellInstance(D=3, N=13, y_parity="prime")
    with pytest.raises(InvalidParameters):
        PellInstance(D=5, N=4).unit_element()
    with pytest.raises(InvalidUnit):
        PellInstance(D=3, N=13, unit=(1, 1)).unit_element()
    assert PellInstance(D=5, N=4, unit=(9, 4)).unit_element().norm() == 1


def test_within_bound_is_exact():
    inst = PellInstance(D=3, N=1, bound=Fraction(14))
    assert inst.within_bound(7, 4)
    assert not inst.within_bound(8, 4)


def test_mnk_has_no_solutions():
    assert mnk_feasible(100, 100, 99) == []
    argument = mnk_closed_argument(100, 100)
    assert argument.m1_row_zero and argument.inequality_holds


def test_dj_equation():
    assert dj_equation_check(2, 1, 1, 1)
    assert dj_equation_check(4, 1, 1, 1)
    assert not dj_equation_check(3, 1, 1, 1)
    hits = dj_equation_sweep(4, 1, (1,), 1)
    assert (2, 1, 1, 1) in hits
    assert (4, 1, 1, 1) not in hits
    assert (4, 1, 1, 1) in dj_equation_sweep(4, 1, (1,), 1, in_domain_only=False)
    with pytest.raises(InvalidParameters):
        dj_equation_check(0, 1, 1, 1)


def test_dj_equation_empty_for_k_2_to_4():
    assert dj_equation_sweep(12, 6, (2, 3, 4), 10**4) == []


def test_pivot_certificate_bundle():
    bundle = pivot_nonvanishing_certificates(2_000)
    assert bundle.all_empty
    payload = bundle.to_dict()
    assert payload["all_empty"] is True
    assert set(payload["scans"]) == {"2", "3", "4"}
