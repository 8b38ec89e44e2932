from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from classifier import (
    Branch,
    CaseParams,
    FAMILY_KINDS,
    RefutationRecord,
    SolutionFamily,
    case_analysis,
    check_finitely_many_a,
    classify,
    enumerate_cases,
    family_by_kind,
    family_jet_setup,
    finitely_many_a_family,
    intro_counterexamples,
    is_eighth_relation,
    lambda_from_djk,
    lambda_relations,
    picard_family,
    polynomial_solutions,
    refute_case_d3,
    refute_case_d4,
    relation_without_lambda,
    resolve_case_d2,
    solve_quadratic_ansatz,
    verify_family,
)
from errors import DegenerateDenominator, DegenerateParameters, InvalidParameters
from functions import ExpPolyFunction
from scalars import EisensteinRational, FloatScalar, GaussianRational, is_close
from verifier import EXIT_HOLDS


@pytest.fixture(scope="module")
def analysis():
    return case_analysis(n_max=2000)


def test_classify_generic_pair():
    kinds = [f.kind for f in classify(2, 1)]
    assert kinds == ["i", "ii", "iii"]


def test_classify_eighth_relation_adds_family_iv():
    families = classify(8, -1)
    assert [f.kind for f in families] == ["i", "ii", "iii", "iv"]
    assert families[-1].parameters["lambda"] == Fraction(1, 6)


@pytest.mark.parametrize("a, b", [(0, 1), (1, 0), (3, 3)])
def test_classify_rejects_degenerate_pairs(a, b):
    with pytest.raises(InvalidParameters):
        classify(a, b)


def test_eighth_relation():
    assert is_eighth_relation(8, -1)
    assert is_eighth_relation(Fraction(1, 2), Fraction(-1, 16))
    assert not is_eighth_relation(8, 1)


@pytest.mark.parametrize("kind, a, b", [("i", 2, 1), ("ii", 2, 1), ("iii", 2, 1), ("iv", 8, None)])
def test_every_family_satisfies_the_sharing_condition(kind, a, b):
    report = verify_family(family_by_kind(kind, a, b), C=1)
    assert report.holds
    assert report.exit_code == EXIT_HOLDS


def test_family_iv_with_another_constant():
    report = verify_family(family_by_kind("iv", 8), C=Fraction(1, 2))
    assert report.holds


def test_family_by_kind_errors():
    with pytest.raises(InvalidParameters):
        family_by_kind("v", 2, 1)
    with pytest.raises(InvalidParameters):
        family_by_kind("i", 2)
    with pytest.raises(InvalidParameters, match="b = -a/8"):
        family_by_kind("iv", 8, 2)
    assert FAMILY_KINDS == ("i", "ii", "iii", "iv")


def test_picard_family_exponent():
    family = picard_family(2, 1)
    assert family.kind == "iii"
    assert family.parameters["lambda"] == -1


def test_picard_family_with_zero_a_is_relaxed_exponential():
    family = picard_family(0, 1)
    assert family.kind == "ii"
    assert family.relaxed


@pytest.mark.parametrize("a, b", [(2, 2), (2, 0)])
def test_picard_family_degenerate(a, b):
    with pytest.raises(DegenerateParameters):
        picard_family(a, b)


def test_quadratic_ansatz_forces_one_sixth():
    ansatz = solve_quadratic_ansatz(8)
    assert ansatz.b == -1
    assert ansatz.a_r_squared == 48
    assert ansatz.lam == Fraction(1, 6)
    assert ansatz.b_point == Fraction(1, 4)
    assert all(ansatz.checks.values())


def test_quadratic_ansatz_derives_b_for_other_a():
    ansatz = solve_quadratic_ansatz(Fraction(3, 2))
    assert ansatz.b == Fraction(-3, 16)
    assert ansatz.a_r_squared == 9
    assert ansatz.lam == Fraction(1, 6)
    assert ansatz.b_point == Fraction(1, 4)


def test_quadratic_ansatz_in_float_regime():
    ansatz = solve_quadratic_ansatz(FloatScalar(mpmath.mpc(8), 128))
    assert is_close(ansatz.b, -1, 1e-30)
    assert is_close(ansatz.lam, Fraction(1, 6), 1e-30)
    assert all(ansatz.checks.values())


def test_quadratic_ansatz_needs_nonzero_a():
    with pytest.raises(InvalidParameters):
        solve_quadratic_ansatz(0)


def test_resolve_case_d2():
    family = resolve_case_d2(8)
    assert family.kind == "iv"
    assert family.b == -1
    assert family.constraints == ("b = -a/8", "lambda = 1/6")


def test_instantiate_family_iv():
    candidate = resolve_case_d2(8).instantiate(1)
    assert isinstance(candidate.function, ExpPolyFunction)
    assert candidate.a == 8
    assert candidate.b == -1


def test_unknown_kind_is_rejected():
    with pytest.raises(InvalidParameters):
        SolutionFamily("bogus")


def test_family_round_trip():
    family = resolve_case_d2(8)
    assert SolutionFamily.from_dict(family.to_dict()) == family


def test_case_enumeration(analysis):
    cases = analysis.cases
    assert cases.jet_uniqueness_applied
    assert cases.feasible_tuples() == {(2, 1, 1), (3, 1, 2), (4, 2, 2)}
    assert "jet uniqueness" in cases.rejected_for(5, 2).reason
    assert "violates 2j <= d <= 3j" in cases.rejected_for(7, 2).reason
    assert "not an integer" in cases.rejected_for(6, 3).reason
    assert "without a-points" in cases.rejected_for(3, 3).reason


def test_enumeration_needs_room():
    with pytest.raises(InvalidParameters):
        enumerate_cases(d_max=1)


def test_case_params_validation():
    assert CaseParams(4, 2, 2, Branch.MIXED).as_tuple() == (4, 2, 2)
    with pytest.raises(InvalidParameters):
        CaseParams(7, 2, 5, Branch.MIXED)
    with pytest.raises(InvalidParameters):
        CaseParams(4, 2, 3, Branch.MIXED)
    with pytest.raises(InvalidParameters):
        CaseParams(4, 2, 2, Branch.ALL_B_MULTIPLE)


def test_lambda_for_the_surviving_case():
    assert lambda_from_djk(8, -1, 2, 1) == Fraction(1, 6)
    rel = lambda_relations(8, -1, 2, 1, 1)
    assert rel.consistent
    assert rel.c == Fraction(-2, 9)
    assert rel.from_d == rel.from_j == Fraction(-2, 9)
    assert relation_without_lambda(8, -1, 2, 1, 1)


def test_lambda_relations_fail_off_the_family():
    assert not lambda_relations(8, 1, 2, 1, 1).consistent
    assert not relation_without_lambda(8, 1, 2, 1, 1)


def test_lambda_degenerate_denominator():
    with pytest.raises(DegenerateDenominator):
        lambda_from_djk(4, 1, 2, 1)


def test_refute_d3():
    record = refute_case_d3()
    assert record.refuted
    values = {str(b.value): b.discriminant for b in record.branches}
    assert values["i"] == GaussianRational(0, -4)
    assert values["-i"] == GaussianRational(0, 4)


def test_refute_d4():
    record = refute_case_d4()
    assert record.refuted
    assert record.case.as_tuple() == (4, 2, 2)
    real, w, conj = record.branches
    assert real.discriminant == 256
    assert w.discriminant == EisensteinRational(0, -13)
    assert conj.discriminant == EisensteinRational(0, -13)
    assert w.numeric_check and conj.numeric_check
    assert real.numeric_check is None


def test_refutation_round_trip():
    record = refute_case_d4()
    assert RefutationRecord.from_dict(record.to_dict()).to_dict() == record.to_dict()


def test_only_d2_survives(analysis):
    assert analysis.only_d2_survives
    assert analysis.to_dict()["only_d2_survives"] is True


def test_polynomial_solutions():
    kinds = [f.kind for f in polynomial_solutions(2, 1)]
    assert kinds == ["i", "constant"]
    constant = polynomial_solutions(2, 1)[1]
    assert verify_family(constant, C=5).holds
    with pytest.raises(InvalidParameters):
        constant.instantiate(2)


def test_intro_counterexamples_are_relaxed():
    quadratic, shifted = intro_counterexamples(2, 3)
    assert quadratic.relaxed and shifted.relaxed
    assert quadratic.a == 0 and quadratic.b == 3
    assert shifted.a == 2 and shifted.b == 0
    assert verify_family(shifted, C=1).holds


def test_finitely_many_a():
    family = finitely_many_a_family(0, 1)
    assert family.parameters["lambda"] == 1
    assert check_finitely_many_a(0, 2, 1).admissible
    assert check_finitely_many_a(2, 2, 1).admissible
    bad = check_finitely_many_a(5, 2, 1)
    assert not bad.admissible
    assert bad.residual == -5


def test_family_jet_setup():
    iv = resolve_case_d2(8)
    assert family_jet_setup(iv, "a-point") == (1, 1)
    assert family_jet_setup(iv, "multiple-b-point", C=2) == (1, Fraction(1, 8))
    iii = family_by_kind("iii", 2, 1)
    assert family_jet_setup(iii, "simple-b-point") == (1, -1)
    with pytest.raises(InvalidParameters):
        family_jet_setup(iii, "a-point")
    with pytest.raises(InvalidParameters):
        family_jet_setup(family_by_kind("iii", 3, 1), "simple-b-point")
    with pytest.raises(InvalidParameters):
        family_jet_setup(family_by_kind("ii", 2, 1), "a-point")


def test_classify_one_two():
    assert [f.kind for f in classify(1, 2)] == ["i", "ii", "iii"]


gaussian = st.builds(
    GaussianRational,
    st.fractions(min_value=-50, max_value=50, max_denominator=20),
    st.fractions(min_value=-50, max_value=50, max_denominator=20),
).filter(bool)


@given(gaussian)
def test_family_iv_appears_exactly_on_the_eighth_relation(a):
    assert "iv" in [f.kind for f in classify(a, -a / 8)]
    b = -a / 8 + 1
    if b and b != a:
        assert "iv" not in [f.kind for f in classify(a, b)]
