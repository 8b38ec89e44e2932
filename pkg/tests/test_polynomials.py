from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from errors import InvalidParameters, LeadingZero, MixedRegime
from polynomials import (
    MINUS_INFINITY,
    Poly,
    discriminant_quadratic,
    poly_divmod,
    poly_gcd,
    poly_roots,
    square_free_decomposition,
)
from scalars import EisensteinRational, FloatScalar, GaussianRational, Regime

small = st.integers(min_value=-20, max_value=20)


def test_trailing_zeros_are_dropped():
    p = Poly((1, 2, 0, 0))
    assert p.degree == 1
    assert Poly().degree == MINUS_INFINITY
    with pytest.raises(LeadingZero):
        Poly().leading


def test_mixed_coefficients_rejected():
    with pytest.raises(MixedRegime):
        Poly((GaussianRational(1), FloatScalar.from_parts(1)))


def test_evaluation_and_derivative():
    p = Poly((8, -48, 48))
    assert p(Fraction(1, 2)) == -4
    assert p.derive() == Poly((-48, 96))


@given(st.lists(small, min_size=1, max_size=5), st.lists(small, min_size=1, max_size=4))
def test_division_reconstructs(pc, qc):
    p, q = Poly(tuple(pc)), Poly(tuple(qc))
    if q.is_zero:
        return
    quot, rem = poly_divmod(p, q)
    assert quot * q + rem == p
    assert rem.is_zero or rem.degree < q.degree


def test_gcd_is_monic_common_factor():
    p = Poly.from_roots([1, 2, 3])
    q = Poly.from_roots([2, 3, 5], leading=7)
    assert poly_gcd(p, q) == Poly.from_roots([2, 3])


def test_square_free_decomposition_multiplicities():
    p = Poly.from_roots([1, 1, 1, -2, GaussianRational(0, 1), GaussianRational(0, 1)])
    parts = {m: f for f, m in square_free_decomposition(p)}
    assert set(parts) == {1, 2, 3}
    assert parts[3] == Poly.from_roots([1])
    assert parts[2] == Poly.from_roots([GaussianRational(0, 1)])


def test_exact_roots_with_multiplicity():
    # t (2t - 1)(3t - 1)
    p = Poly((1, -5, 6)) * Poly((0, 1))
    roots = poly_roots(p)
    locations = {r.location: r.multiplicity for r in roots.roots}
    assert roots.multiplicity_at_zero() == 1
    assert len(roots.nonzero()) == 2
    assert sum(locations.values()) == 3
    for r in roots.nonzero():
        assert r.is_exact
        assert p(r.location) == 0


def test_double_root_found_exactly():
    # 16 t^2 - 8 t + 1 = (4t - 1)^2
    roots = poly_roots(Poly((1, -8, 16)))
    assert len(roots.roots) == 1
    assert roots.roots[0].location == Fraction(1, 4)
    assert roots.roots[0].multiplicity == 2


def test_gaussian_roots_snap_exactly():
    p = Poly.from_roots([GaussianRational(1, 2), GaussianRational(-3, 1), 5])
    roots = poly_roots(p)
    assert all(r.is_exact for r in roots.roots)
    assert {r.location for r in roots.roots} == {GaussianRational(1, 2), GaussianRational(-3, 1), GaussianRational(5)}


def test_eisenstein_roots():
    w = EisensteinRational.generator()
    # (t - w)(t - 2)
    p = Poly((2 * w, -(w + 2), EisensteinRational(1)))
    assert p.regime is Regime.EXACT_EISENSTEIN
    roots = poly_roots(p)
    assert {r.location for r in roots.roots} == {w, EisensteinRational(2)}


def test_float_roots_have_small_residual():
    p = Poly((2, 0, 1)).to_float(128)
    roots = poly_roots(p, tol=1e-30)
    assert roots.degree == 2
    for r in roots.roots:
        assert not r.is_exact
        assert p(r.location).magnitude() < 1e-25


def test_root_solver_rejects_constants():
    with pytest.raises(InvalidParameters):
        poly_roots(Poly((3,)))


def test_quadratic_discriminant():
    assert discriminant_quadratic(16, -8, 1) == 0
    assert discriminant_quadratic(1, 0, 1) == -4
    with pytest.raises(LeadingZero):
        discriminant_quadratic(0, 1, 1)


def test_serialized_coefficients_read_back():
    p = Poly((GaussianRational(Fraction(1, 3), -2), 0, 5))
    assert Poly.from_serialized(p.serialize()) == p
