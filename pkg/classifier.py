# classifier.py
"""
Case analysis for entire solutions of

    f(z) = a  =>  f'(z) = a      and      f'(z) = b  =>  f(z) = b

Periodic solutions are f = P(e^(lam z)) with deg P = d. With j the number of
distinct b-points of f' per period and k+1 their multiplicity, only
(d, j, k) in {(2,1,1), (3,1,2), (4,2,2)} survive the counting and jet
arguments. d = 2 yields the family f = 6aC e^(z/6)(C e^(z/6) - 1) + a with
b = -a/8; d = 3 and d = 4 are refuted by nonzero discriminants.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import mpmath

from diophantine import PivotCertificates, pivot_nonvanishing_certificates
from errors import DegenerateDenominator, DegenerateParameters, InvalidParameters
from expressions import BinOp, Literal, Pow, Var
from functions import (
    AffineFunction,
    Candidate,
    CandidateFunction,
    ExpPolyFunction,
    ExprFunction,
    dz_derive,
    eval_poly_at,
)
from polynomials import Poly, discriminant_quadratic, poly_derive
from scalars import (
    DEFAULT_PRECISION,
    EisensteinRational,
    FieldElement,
    FloatScalar,
    GaussianRational,
    I,
    as_scalar,
    is_close,
    parse_scalar,
    promote,
)
from verifier import SharingProblem, VerificationReport, verify

logger = logging.getLogger(__name__)


# ---------- case enumeration ----------


class Branch(str, Enum):
    ALL_B_MULTIPLE = "all-b-multiple"
    MIXED = "mixed"


@dataclass(frozen=True)
class CaseParams:
    d: int
    j: int
    k: int
    branch: Branch

    def __post_init__(self) -> None:
        if not 2 * self.j <= self.d <= 3 * self.j:
            raise InvalidParameters(f"(d, j) = ({self.d}, {self.j}) violates 2j <= d <= 3j")
        if self.branch is Branch.ALL_B_MULTIPLE and (self.j != 1 or self.d not in (2, 3)):
            raise InvalidParameters("all b-points multiple forces j = 1 and d in {2, 3}")
        if self.branch is Branch.MIXED and (self.j < 2 or (self.d - self.j) != self.k * (self.j - 1)):
            raise InvalidParameters("mixed branch needs k = (d - j)/(j - 1)")

    def as_tuple(self) -> tuple[int, int, int]:
        return self.d, self.j, self.k

    def to_dict(self) -> dict:
        return {"d": self.d, "j": self.j, "k": self.k, "branch": self.branch.value}

    @staticmethod
    def from_dict(d: dict) -> "CaseParams":
        return CaseParams(d["d"], d["j"], d["k"], Branch(d["branch"]))


@dataclass(frozen=True)
class RejectedCase:
    d: int
    j: int
    reason: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class CaseEnumeration:
    feasible: tuple[CaseParams, ...]
    rejected: tuple[RejectedCase, ...]
    jet_uniqueness_applied: bool

    def feasible_tuples(self) -> set[tuple[int, int, int]]:
        return {c.as_tuple() for c in self.feasible}

    def rejected_for(self, d: int, j: int) -> RejectedCase | None:
        return next((r for r in self.rejected if (r.d, r.j) == (d, j)), None)

    def to_dict(self) -> dict:
        return {
            "feasible": [c.to_dict() for c in self.feasible],
            "rejected": [r.to_dict() for r in self.rejected],
            "jet_uniqueness_applied": self.jet_uniqueness_applied,
        }


def enumerate_cases(d_max: int = 12, certificates: PivotCertificates | None = None) -> CaseEnumeration:
    """
    Structurally feasible (d, j, k) up to d_max; everything else is returned
    with the constraint it violates.

    The bound d - j <= 2 in the mixed branch needs nonvanishing pivots, which is
    what the certificate bundle establishes for k = 2, 3, 4.
    """
    if d_max < 2:
        raise InvalidParameters("d_max must be >= 2")
    certificates = certificates or pivot_nonvanishing_certificates()
    jet_uniqueness = certificates.all_empty
    if not jet_uniqueness:
        logger.warning("pivot certificates incomplete; d - j <= 2 not applied")

    feasible = []
    rejected = []
    for d in range(2, d_max + 1):
        for j in range(1, d + 1):
            if j == d:
                rejected.append(RejectedCase(d, j, "j = d leaves f without a-points"))
                continue
            if not 2 * j <= d <= 3 * j:
                rejected.append(RejectedCase(d, j, f"violates 2j <= d <= 3j ({d} vs {2 * j}..{3 * j})"))
                continue
            if j == 1:
                feasible.append(CaseParams(d, 1, d - 1, Branch.ALL_B_MULTIPLE))
                continue
            if (d - j) % (j - 1):
                rejected.append(RejectedCase(d, j, f"k = (d - j)/(j - 1) = {d - j}/{j - 1} is not an integer"))
                continue
            k = (d - j) // (j - 1)
            if not 2 <= k <= 4:
                rejected.append(RejectedCase(d, j, f"mixed branch needs 2 <= k <= 4, got k = {k}"))
                continue
            if jet_uniqueness and d - j > 2:
                rejected.append(
                    RejectedCase(d, j, f"jet uniqueness: d - j = {d - j} > 2 with k = {k} (pivots never vanish)")
                )
                continue
            feasible.append(CaseParams(d, j, k, Branch.MIXED))
    logger.info("case enumeration up to d=%d: %d feasible, %d rejected", d_max, len(feasible), len(rejected))
    return CaseEnumeration(tuple(feasible), tuple(rejected), jet_uniqueness)


# ---------- lambda ----------


def lambda_from_djk(a, b, d: int, j: int) -> FieldElement:
    """lam = d b / (d^2 b - j^2 a), from the highest and lowest terms of P."""
    a, b = promote(a, b)
    if d == j:
        logger.warning("d = j = %d is outside the admissible cases", d)
    denominator = d * d * b - j * j * a
    if not isinstance(denominator, FloatScalar) and not denominator:
        raise DegenerateDenominator(f"d^2 b = j^2 a for a={a}, b={b}, d={d}, j={j}")
    return d * b / denominator


@dataclass(frozen=True)
class LambdaRelations:
    lam: FieldElement
    from_d: FieldElement
    from_j: FieldElement
    c: FieldElement
    consistent: bool

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam.serialize(),
            "from_d": self.from_d.serialize(),
            "from_j": self.from_j.serialize(),
            "c": self.c.serialize(),
            "consistent": self.consistent,
        }


def lambda_relations(a, b, d: int, j: int, k: int, tol: float = 1e-24) -> LambdaRelations:
    """(lam d)^2 - lam d and (a/b)(lam j)^2 against c = (k+1) b/(a - b)."""
    a, b = promote(a, b)
    lam = lambda_from_djk(a, b, d, j)
    from_d = (lam * d) ** 2 - lam * d
    from_j = a / b * (lam * j) ** 2
    c = (k + 1) * b / (a - b)
    consistent = is_close(from_d, c, tol) and is_close(from_j, c, tol)
    return LambdaRelations(lam, from_d, from_j, c, consistent)


def relation_without_lambda(a, b, d: int, j: int, k: int, tol: float = 1e-24) -> bool:
    """(k+1) b/(a - b) == d^2 j^2 a b / (d^2 b - j^2 a)^2."""
    a, b = promote(a, b)
    denominator = d * d * b - j * j * a
    if not isinstance(denominator, FloatScalar) and not denominator:
        raise DegenerateDenominator(f"d^2 b = j^2 a for a={a}, b={b}, d={d}, j={j}")
    return is_close((k + 1) * b / (a - b), d * d * j * j * a * b / denominator**2, tol)


# ---------- solution families ----------


def _require_nonzero(C, kind: str) -> FieldElement:
    C = as_scalar(C)
    if not isinstance(C, FloatScalar) and not C:
        raise InvalidParameters(f"family ({kind}) needs a nonzero constant C")
    return C


def _family_i(p: dict, C) -> CandidateFunction:
    return AffineFunction(p["a"], C)


def _family_ii(p: dict, C) -> CandidateFunction:
    C = _require_nonzero(C, "ii")
    return ExpPolyFunction(1, Poly((C * 0, C)))


def _family_iii(p: dict, C) -> CandidateFunction:
    C = _require_nonzero(C, "iii")
    a, C = promote(p["a"], C)
    return ExpPolyFunction(p["lambda"], Poly((a, C)))


def _family_iv(p: dict, C) -> CandidateFunction:
    C = _require_nonzero(C, "iv")
    a, C = promote(p["a"], C)
    return ExpPolyFunction(p["lambda"], Poly((a, -6 * a * C, 6 * a * C * C)))


def _family_constant(p: dict, C) -> CandidateFunction:
    C = as_scalar(C)
    if is_close(C, p["a"], 1e-30):
        raise InvalidParameters("the constant solution must differ from a")
    return AffineFunction(C * 0, C)


def _family_quadratic(p: dict, C) -> CandidateFunction:
    return ExprFunction(BinOp("*", Literal.of(p["b"] / 4), Pow(Var(), 2)))


def _family_shifted_exp(p: dict, C) -> CandidateFunction:
    C = _require_nonzero(C, "shifted-exp")
    a, C = promote(p["a"], C)
    return ExpPolyFunction(a / C, Poly((a - C, C)))


_BUILDERS: dict[str, Callable[[dict, FieldElement], CandidateFunction]] = {
    "i": _family_i,
    "ii": _family_ii,
    "iii": _family_iii,
    "iv": _family_iv,
    "constant": _family_constant,
    "quadratic": _family_quadratic,
    "shifted-exp": _family_shifted_exp,
}


@dataclass(frozen=True)
class SolutionFamily:
    """A one-parameter family in the free constant C."""

    kind: str
    parameters: dict = field(default_factory=dict)
    constraints: tuple[str, ...] = ()
    form: str = ""
    relaxed: bool = False

    def __post_init__(self) -> None:
        if self.kind not in _BUILDERS:
            raise InvalidParameters(f"unknown family kind {self.kind!r}")

    @property
    def a(self) -> FieldElement:
        return self.parameters["a"]

    @property
    def b(self) -> FieldElement:
        return self.parameters["b"]

    def instantiate(self, C=1) -> Candidate:
        f = _BUILDERS[self.kind](self.parameters, as_scalar(C))
        return Candidate(f, self.a, self.b)

    def problem(self) -> SharingProblem:
        return SharingProblem(self.a, self.b, relaxed=self.relaxed)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "parameters": {name: value.serialize() for name, value in self.parameters.items()},
            "constraints": list(self.constraints),
            "form": self.form,
            "relaxed": self.relaxed,
        }

    @staticmethod
    def from_dict(d: dict) -> "SolutionFamily":
        return SolutionFamily(
            kind=d["kind"],
            parameters={name: parse_scalar(value) for name, value in d.get("parameters", {}).items()},
            constraints=tuple(d.get("constraints", ())),
            form=d.get("form", ""),
            relaxed=d.get("relaxed", False),
        )


def verify_family(
    family: SolutionFamily,
    C=1,
    tol: float = 1e-24,
    precision_bits: int = DEFAULT_PRECISION,
    **verify_options,
) -> VerificationReport:
    candidate = family.instantiate(C)
    return verify(candidate.function, family.problem(), tol, precision_bits, **verify_options)


def _check_problem(a, b) -> tuple[FieldElement, FieldElement]:
    a, b = as_scalar(a), as_scalar(b)
    if not isinstance(a, FloatScalar) and not a or isinstance(a, FloatScalar) and a.is_zero():
        raise InvalidParameters("a must be nonzero")
    if not isinstance(b, FloatScalar) and not b or isinstance(b, FloatScalar) and b.is_zero():
        raise InvalidParameters("b must be nonzero")
    if is_close(a, b, 1e-30):
        raise InvalidParameters(f"a and b must differ (a = b = {a})")
    return a, b


def affine_family(a, b) -> SolutionFamily:
    a, b = as_scalar(a), as_scalar(b)
    return SolutionFamily("i", {"a": a, "b": b}, ("f' = a everywhere",), "a*z + C")


def exponential_family(a, b) -> SolutionFamily:
    a, b = as_scalar(a), as_scalar(b)
    return SolutionFamily("ii", {"a": a, "b": b}, ("f = f'",), "C*exp(z)")


def picard_family(a, b) -> SolutionFamily:
    """
    f = C e^(lam z) + a with lam = b/(b - a); a is a Picard exceptional value.

    With P = C constant, R = b P/(P' + lam P) = b/lam must be b - a, and at every
    b-point of f' we get C e^(lam z) = b/lam, hence f = b there, with f'' = lam b != 0.
    """
    a, b = promote(a, b)
    if is_close(a, b, 1e-30):
        raise DegenerateParameters(f"a = b = {a} has no Picard family")
    if not isinstance(b, FloatScalar) and not b:
        raise DegenerateParameters("b = 0 gives lambda = 0")
    lam = b / (b - a)
    r_value = b / lam
    if not is_close(r_value, b - a, 1e-24):
        raise DegenerateParameters(f"R = {r_value} differs from b - a = {b - a}")
    if not isinstance(a, FloatScalar) and not a:
        return SolutionFamily("ii", {"a": a, "b": b}, ("f = f'", "lambda = 1"), "C*exp(z)", relaxed=True)
    return SolutionFamily(
        "iii",
        {"a": a, "b": b, "lambda": lam},
        (f"lambda = {lam}", f"R = {b - a}", "b-points of f' are simple with f = b"),
        f"C*exp({lam}*z) + {a}",
    )


@dataclass(frozen=True)
class QuadraticAnsatz:
    """f = A t (t - r) + a with the derived relations, at r = 1/C."""

    a: FieldElement
    b: FieldElement
    lam: FieldElement
    a_r_squared: FieldElement
    b_point: FieldElement
    checks: dict

    def to_dict(self) -> dict:
        return {
            "a": self.a.serialize(),
            "b": self.b.serialize(),
            "lambda": self.lam.serialize(),
            "A*r^2": self.a_r_squared.serialize(),
            "b_point_t": self.b_point.serialize(),
            "checks": self.checks,
        }


def solve_quadratic_ansatz(a) -> QuadraticAnsatz:
    """
    Solve for b, lam and A r^2 from three relations on P = A t (t - r) + a:
    f' = a at t = r, the double b-point of f' sits at the nonzero zero of f'',
    and f = b there. With r = 1 this gives a = lam A r^2, b = -lam A r^2/8 at
    t = r/4 and b = -3 A r^2/16 + a.
    """
    a = as_scalar(a)
    if not isinstance(a, FloatScalar) and not a or isinstance(a, FloatScalar) and a.is_zero():
        raise InvalidParameters("a must be nonzero")
    zero = a * 0
    one = zero + 1
    shape = Poly((zero, -one, one))  # t (t - 1)
    d1_shape = dz_derive(shape, one)  # 2t^2 - t
    d2_shape = dz_derive(d1_shape, one)  # 4t^2 - t

    # f'(1) = lam A d1_shape(1) = a
    lam_a = a / eval_poly_at(d1_shape, 1)
    # f'' = lam^2 A t (4t - 1)
    t_b = -d2_shape.coeff(1) / d2_shape.coeff(2)
    b = lam_a * eval_poly_at(d1_shape, t_b)
    # f(t_b) = A shape(t_b) + a = b
    a_r2 = (b - a) / eval_poly_at(shape, t_b)
    lam = lam_a / a_r2

    # replay on r = 1: P = A t^2 - A t + a
    poly = Poly((a, -a_r2, a_r2))
    d1 = dz_derive(poly, lam)
    d2 = dz_derive(d1, lam)
    checks = {
        "f(r) = a": is_close(eval_poly_at(poly, 1), a, 1e-24),
        "f'(r) = a": is_close(eval_poly_at(d1, 1), a, 1e-24),
        "f(r/4) = b": is_close(eval_poly_at(poly, t_b), b, 1e-24),
        "f'(r/4) = b": is_close(eval_poly_at(d1, t_b), b, 1e-24),
        "f''(r/4) = 0": is_close(eval_poly_at(d2, t_b), 0, 1e-24),
    }
    if not all(checks.values()):
        failed = [name for name, ok in checks.items() if not ok]
        raise DegenerateParameters(f"quadratic ansatz relations fail: {', '.join(failed)}")
    return QuadraticAnsatz(a, b, lam, a_r2, t_b, checks)


def resolve_case_d2(a) -> SolutionFamily:
    """Family (iv): f = 6aC e^(z/6)(C e^(z/6) - 1) + a, which needs b = -a/8."""
    ansatz = solve_quadratic_ansatz(a)
    return SolutionFamily(
        "iv",
        {"a": ansatz.a, "b": ansatz.b, "lambda": ansatz.lam},
        ("b = -a/8", f"lambda = {ansatz.lam}"),
        f"6*{ansatz.a}*C*exp(z/6)*(C*exp(z/6) - 1) + {ansatz.a}",
    )


def is_eighth_relation(a, b, tol: float = 1e-24) -> bool:
    """b == -a/8, exactly for exact inputs."""
    a, b = promote(a, b)
    return is_close(b, -a / 8, tol)


def classify(a, b, tol: float = 1e-24) -> list[SolutionFamily]:
    """Every entire solution family for the pair (a, b)."""
    a, b = _check_problem(a, b)
    families = [affine_family(a, b), exponential_family(a, b), picard_family(a, b)]
    if is_eighth_relation(a, b, tol):
        families.append(resolve_case_d2(a))
    logger.info("classify a=%s b=%s: %s", a, b, ", ".join(f.kind for f in families))
    return families


# ---------- refutations ----------


@dataclass(frozen=True)
class BranchDiscriminant:
    parameter: str
    value: FieldElement
    discriminant: FieldElement
    nonzero: bool
    numeric_check: str | None = None

    def to_dict(self) -> dict:
        out = {
            "parameter": self.parameter,
            "value": self.value.serialize(),
            "discriminant": f"discriminant = {self.discriminant}",
            "discriminant_value": self.discriminant.serialize(),
            "nonzero": self.nonzero,
        }
        if self.numeric_check is not None:
            out["numeric_check"] = self.numeric_check
        return out

    @staticmethod
    def from_dict(d: dict) -> "BranchDiscriminant":
        return BranchDiscriminant(
            d["parameter"],
            parse_scalar(d["value"]),
            parse_scalar(d["discriminant_value"]),
            d["nonzero"],
            d.get("numeric_check"),
        )


@dataclass(frozen=True)
class RefutationRecord:
    case: CaseParams
    ansatz: str
    relation: str
    branches: tuple[BranchDiscriminant, ...]
    excluded: tuple[tuple[str, str], ...]
    normalization: str = "r = 1"
    homogeneity_degree: int = 2

    @property
    def refuted(self) -> bool:
        return all(b.nonzero for b in self.branches)

    def to_dict(self) -> dict:
        return {
            "case": self.case.to_dict(),
            "ansatz": self.ansatz,
            "relation": self.relation,
            "branches": [b.to_dict() for b in self.branches],
            "excluded": [{"value": v, "reason": r} for v, r in self.excluded],
            "normalization": self.normalization,
            "homogeneity_degree": self.homogeneity_degree,
            "refuted": self.refuted,
        }

    @staticmethod
    def from_dict(d: dict) -> "RefutationRecord":
        return RefutationRecord(
            case=CaseParams.from_dict(d["case"]),
            ansatz=d["ansatz"],
            relation=d["relation"],
            branches=tuple(BranchDiscriminant.from_dict(b) for b in d["branches"]),
            excluded=tuple((e["value"], e["reason"]) for e in d["excluded"]),
            normalization=d.get("normalization", "r = 1"),
            homogeneity_degree=d.get("homogeneity_degree", 2),
        )


def _t_times_derivative(p: Poly) -> Poly:
    """t Q'(t), i.e. dz with lam = 1."""
    dp = poly_derive(p)
    return Poly((dp.coeffs[0] * 0,) + dp.coeffs) if not dp.is_zero else Poly()


def _shape_d3(s) -> Poly:
    # t (t - 1)(t - s)
    return Poly((0, s, -(1 + s), 1))


def refute_case_d3() -> RefutationRecord:
    """
    f = C t (t - 1)(t - s) + a. f' = a at t = 1 and t = s forces
    (1 - s)(1 + s^2) = 0; s = 1 would make an a-point double, and for s = +-i the
    quadratic factor of f'' has a nonzero discriminant.
    """
    branches = []
    for s in (I, -I):
        d1 = _t_times_derivative(_shape_d3(s))
        if eval_poly_at(d1, 1) != eval_poly_at(d1, s):
            raise DegenerateParameters(f"s = {s} does not satisfy f'(1) = f'(s)")
        d2 = _t_times_derivative(d1)
        # f'' / (lam^2 C) = t (9 t^2 - 4(1 + s) t + s)
        alpha, beta, gamma = d2.coeff(3), d2.coeff(2), d2.coeff(1)
        if (alpha, beta, gamma) != (9, -4 * (1 + s), s) or d2.coeff(0):
            raise DegenerateParameters(f"unexpected f'' shape for s = {s}: {d2}")
        delta = discriminant_quadratic(alpha, beta, gamma)
        branches.append(BranchDiscriminant("s", s, delta, bool(delta)))
    return RefutationRecord(
        case=CaseParams(3, 1, 2, Branch.ALL_B_MULTIPLE),
        ansatz="f = C t (t - 1)(t - s) + a",
        relation="(1 - s)(1 + s^2) = 0",
        branches=tuple(branches),
        excluded=(("1", "the a-points of f are simple"),),
    )


def _shape_d4(w) -> Poly:
    # t^2 (t - 1)(t - w)
    zero = w * 0
    return Poly((zero, zero, w, -(1 + w), zero + 1))


def refute_case_d4(precision_bits: int = DEFAULT_PRECISION) -> RefutationRecord:
    """
    f = C t^2 (t - 1)(t - w) + a. f' = a at t = 1 and t = w forces
    (1 - w)(1 + w^3) = 0, so w = -1 or w is a primitive 6th root of unity
    (w^2 = w - 1, computed exactly in Q(w)). Each gives a nonzero discriminant
    of 16 t^2 - 9(1 + w) t + 4w.
    """
    candidates: list[tuple[FieldElement, bool]] = [
        (GaussianRational(-1), False),
        (EisensteinRational.generator(), False),
        (EisensteinRational.generator(), True),
    ]
    branches = []
    for w, conjugate in candidates:
        d1 = _t_times_derivative(_shape_d4(w))
        if eval_poly_at(d1, 1) != eval_poly_at(d1, w):
            raise DegenerateParameters(f"w = {w} does not satisfy f'(1) = f'(w)")
        d2 = _t_times_derivative(d1)
        # f'' / (lam^2 C) = t^2 (16 t^2 - 9(1 + w) t + 4w)
        alpha, beta, gamma = d2.coeff(4), d2.coeff(3), d2.coeff(2)
        delta = discriminant_quadratic(alpha, beta, gamma)
        numeric = None
        if isinstance(w, EisensteinRational):
            numeric = _numeric_d4_check(delta, conjugate, precision_bits)
        label = "w" if not conjugate else "conj(w)"
        branches.append(BranchDiscriminant(label, w, delta, bool(delta), numeric))
    return RefutationRecord(
        case=CaseParams(4, 2, 2, Branch.MIXED),
        ansatz="f = C t^2 (t - 1)(t - w) + a",
        relation="(1 - w)(1 + w^3) = 0",
        branches=tuple(branches),
        excluded=(("1", "the a-points of f are simple"),),
    )


def _numeric_d4_check(delta: EisensteinRational, conjugate: bool, precision_bits: int) -> str:
    """Recompute 81(1 + w)^2 - 256 w at w = e^(+-i pi/3) and compare with `delta`."""
    with mpmath.workprec(precision_bits):
        w = mpmath.expjpi(mpmath.mpf(-1 if conjugate else 1) / 3)
        direct = 81 * (1 + w) ** 2 - 256 * w
        embedded = delta.to_float(precision_bits, conjugate_root=conjugate).value
        err = mpmath.fabs(direct - embedded)
        if err > mpmath.mpf(2) ** (-(precision_bits - 16)):
            raise DegenerateParameters(f"numeric discriminant disagrees with Q(w) value by {err}")
        return f"|direct - exact| = {mpmath.nstr(err, 5)} at {precision_bits} bits"


# ---------- supplementary families ----------


def polynomial_solutions(a, b) -> list[SolutionFamily]:
    """Polynomial solutions: a z + B with B free, and the constant B != a."""
    a, b = _check_problem(a, b)
    return [
        affine_family(a, b),
        SolutionFamily("constant", {"a": a, "b": b}, ("B != a",), "B"),
    ]


def intro_counterexamples(a, b) -> list[SolutionFamily]:
    """
    Solutions once a = 0 or b = 0 is allowed: (b/4) z^2 for the pair (0, b) and
    C e^((a/C) z) + a - C for the pair (a, 0). Neither satisfies f = f'.
    """
    a, b = as_scalar(a), as_scalar(b)
    return [
        SolutionFamily("quadratic", {"a": a * 0, "b": b}, ("a = 0",), f"({b}/4)*z^2", relaxed=True),
        SolutionFamily("shifted-exp", {"a": a, "b": b * 0}, ("b = 0",), f"C*exp(({a}/C)*z) + {a} - C", relaxed=True),
    ]


def finitely_many_a_family(A, b) -> SolutionFamily:
    """f = C e^(b z/(b - A)) + A, the shape forced when f takes A only finitely often."""
    A, b = promote(A, b)
    if is_close(A, b, 1e-30):
        raise DegenerateParameters("A = b gives no exponent")
    lam = b / (b - A)
    return SolutionFamily(
        "iii",
        {"a": A, "b": b, "lambda": lam},
        (f"lambda = {lam}", f"A = {A} omitted"),
        f"C*exp({lam}*z) + {A}",
        relaxed=True,
    )


@dataclass(frozen=True)
class OmittedValueCheck:
    A: FieldElement
    a: FieldElement
    b: FieldElement
    residual: FieldElement
    admissible: bool

    def to_dict(self) -> dict:
        return {
            "A": self.A.serialize(),
            "a": self.a.serialize(),
            "b": self.b.serialize(),
            "residual": self.residual.serialize(),
            "admissible": self.admissible,
        }


def check_finitely_many_a(A, a, b, tol: float = 1e-24) -> OmittedValueCheck:
    """
    For A != a the family still attains a, where f' = lam (a - A); (P) then asks
    a (b - A) = b (a - A), i.e. A (b - a) = 0. So A = a or A = 0.
    """
    A, a = promote(A, a)
    a, b = promote(a, b)
    A, b = promote(A, b)
    if is_close(A, a, tol):
        return OmittedValueCheck(A, a, b, A * 0, True)
    residual = a * (b - A) - b * (a - A)
    return OmittedValueCheck(A, a, b, residual, is_close(residual, 0, tol))


# ---------- the whole analysis ----------


@dataclass(frozen=True)
class CaseAnalysis:
    cases: CaseEnumeration
    certificates: PivotCertificates
    d3: RefutationRecord
    d4: RefutationRecord

    @property
    def only_d2_survives(self) -> bool:
        return (
            self.cases.feasible_tuples() == {(2, 1, 1), (3, 1, 2), (4, 2, 2)}
            and self.certificates.all_empty
            and self.d3.refuted
            and self.d4.refuted
        )

    def to_dict(self) -> dict:
        return {
            "cases": self.cases.to_dict(),
            "certificates": self.certificates.to_dict(),
            "refute_d3": self.d3.to_dict(),
            "refute_d4": self.d4.to_dict(),
            "only_d2_survives": self.only_d2_survives,
        }


def case_analysis(n_max: int = 10_000, precision_bits: int = DEFAULT_PRECISION) -> CaseAnalysis:
    certificates = pivot_nonvanishing_certificates(n_max)
    return CaseAnalysis(
        cases=enumerate_cases(certificates=certificates),
        certificates=certificates,
        d3=refute_case_d3(),
        d4=refute_case_d4(precision_bits),
    )


# ---------- families by name ----------

FAMILY_KINDS = ("i", "ii", "iii", "iv")


def family_by_kind(kind: str, a, b=None) -> SolutionFamily:
    """Family (i)-(iv) for the pair (a, b); (iv) fixes b = -a/8 when b is omitted."""
    if kind not in FAMILY_KINDS:
        raise InvalidParameters(f"family must be one of {FAMILY_KINDS}, got {kind!r}")
    if kind == "iv":
        family = resolve_case_d2(a)
        if b is not None and not is_eighth_relation(a, b):
            raise InvalidParameters(f"family (iv) needs b = -a/8 = {family.b}, got b = {as_scalar(b)}")
        return family
    if b is None:
        raise InvalidParameters(f"family ({kind}) needs b")
    a, b = _check_problem(a, b)
    if kind == "i":
        return affine_family(a, b)
    if kind == "ii":
        return exponential_family(a, b)
    return picard_family(a, b)


def family_jet_setup(family: SolutionFamily, anchor: str, C=1) -> tuple[int, FieldElement]:
    """
    (k, t0) for running the jet recurrence on an instance of `family`: the
    multiplicity parameter k and the t-coordinate of an anchor of the given kind.

    Family (iv) has k = 1, a-points at t = 1/C and double b-points of f' at
    t = 1/(4C). Family (iii) satisfies the identity only for a = (k+1) b/k; its
    b-points of f' are simple and sit at t = (b - a)/C.
    """
    C = _require_nonzero(C, family.kind)
    if family.kind == "iv":
        if anchor == "a-point":
            return 1, 1 / C
        if anchor == "multiple-b-point":
            return 1, 1 / (4 * C)
        raise InvalidParameters("family (iv) has a-points and double b-points of f' only")
    if family.kind == "iii":
        a, b = promote(family.a, family.b)
        k = b / (a - b)
        if isinstance(k, FloatScalar) or not k.is_real or k.re.denominator != 1 or k.re < 1:
            raise InvalidParameters(f"family (iii) satisfies the identity only for a = (k+1)b/k; b/(a-b) = {k}")
        if anchor != "simple-b-point":
            raise InvalidParameters("family (iii) omits a; only simple b-points are available")
        return int(k.re), (b - a) / C
    raise InvalidParameters(f"family ({family.kind}) does not satisfy the differential identity")
