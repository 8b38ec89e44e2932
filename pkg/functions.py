# functions.py
"""
Candidate entire functions.

Three shapes:
- `AffineFunction`: f(z) = slope * z + intercept
- `ExpPolyFunction`: f(z) = P(e^(lam z)); everything is computed in t = e^(lam z),
  where f' = dz P with dz Q(t) := lam t Q'(t)
- `ExprFunction`: a parsed closed form, differentiated by series propagation

The candidate document (JSON) is
    {"kind": "affine"|"exppoly"|"expr",
     "slope"/"intercept" | "lambda"/"coeffs" | "source",
     optional "a", "b"}
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import mpmath

import expressions
from errors import DegenerateCandidate, InvalidParameters, ZeroLambda
from expressions import BinOp, Exp, Literal, Node, Pow, Var
from polynomials import Poly, poly_derive, poly_eval
from scalars import (
    DEFAULT_PRECISION,
    FieldElement,
    FloatScalar,
    GaussianRational,
    as_scalar,
    exp_scalar,
    log_scalar,
    parse_scalar,
    promote,
)
from taylor import Jet, TaylorSeries

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AffineFunction:
    slope: FieldElement
    intercept: FieldElement

    kind = "affine"

    def __post_init__(self) -> None:
        object.__setattr__(self, "slope", as_scalar(self.slope))
        object.__setattr__(self, "intercept", as_scalar(self.intercept))

    def __str__(self) -> str:
        return f"{self.slope}*z + {self.intercept}"


@dataclass(frozen=True)
class ExpPolyFunction:
    lam: FieldElement
    poly: Poly

    kind = "exppoly"

    def __post_init__(self) -> None:
        lam = as_scalar(self.lam)
        if not lam:
            raise ZeroLambda("lambda must be nonzero")
        if self.poly.degree < 1:
            raise DegenerateCandidate("P must have degree >= 1")
        object.__setattr__(self, "lam", lam)

    @property
    def degree(self) -> int:
        return int(self.poly.degree)

    def derivative_poly(self, n: int = 1) -> Poly:
        """dz^n P, the t-space form of f^(n)."""
        p = self.poly
        for _ in range(n):
            p = dz_derive(p, self.lam)
        return p

    def __str__(self) -> str:
        return f"P(e^({self.lam}*z)), P(t) = {self.poly}"


@dataclass(frozen=True)
class ExprFunction:
    ast: Node
    source: str = field(default="", compare=False)

    kind = "expr"

    def __str__(self) -> str:
        return self.source or expressions.to_source(self.ast)


CandidateFunction = Union[AffineFunction, ExpPolyFunction, ExprFunction]


def parse_expr(source: str) -> ExprFunction:
    return ExprFunction(expressions.parse(source), source)


# ---------- the derivation dz ----------


def dz_derive(p: Poly, lam) -> Poly:
    """dz Q(t) = lam t Q'(t); kills the constant term and keeps the degree."""
    lam = as_scalar(lam)
    if not lam:
        raise ZeroLambda("dz needs a nonzero lambda")
    dp = poly_derive(p)
    if dp.is_zero:
        return Poly()
    return Poly((dp.coeffs[0] * 0,) + tuple(lam * c for c in dp.coeffs))


# ---------- evaluation ----------


def eval_poly_at(p: Poly, t) -> FieldElement:
    """p(t), converting the exact side when one of p and t is float."""
    t = as_scalar(t)
    if isinstance(t, FloatScalar) and p.regime is not None and not isinstance(p.coeffs[0], FloatScalar):
        p = p.to_float(t.precision_bits)
    elif not isinstance(t, FloatScalar) and p.regime is not None and isinstance(p.coeffs[0], FloatScalar):
        t = t.to_float(p.coeffs[0].precision_bits)
    return poly_eval(p, t)


def t_of_z(f: ExpPolyFunction, z, precision_bits: int = DEFAULT_PRECISION) -> FieldElement:
    lam, z = promote(f.lam, z)
    return exp_scalar(lam * z, precision_bits)


def evaluate_t(f: ExpPolyFunction, t) -> FieldElement:
    """P(t)."""
    return eval_poly_at(f.poly, t)


def evaluate(f: CandidateFunction, z, precision_bits: int = DEFAULT_PRECISION) -> FieldElement:
    """f(z)."""
    z = as_scalar(z)
    if isinstance(f, AffineFunction):
        slope, zz = promote(f.slope, z)
        value, intercept = promote(slope * zz, f.intercept)
        return value + intercept
    if isinstance(f, ExpPolyFunction):
        return evaluate_t(f, t_of_z(f, z, precision_bits))
    return expressions.evaluate(f.ast, z, precision_bits)


def derivative_at(f: CandidateFunction, z, n: int = 1, precision_bits: int = DEFAULT_PRECISION) -> FieldElement:
    """f^(n)(z)."""
    return jet_of(f, z, n, precision_bits).derivs[n]


# ---------- jets ----------


def jet_at_t(f: ExpPolyFunction, t0, order: int) -> Jet:
    """Jet at the point(s) z with e^(lam z) = t0, by repeated dz."""
    if order < 0:
        raise InvalidParameters("jet order must be >= 0")
    t0 = as_scalar(t0)
    derivs = []
    p = f.poly
    for _ in range(order + 1):
        derivs.append(eval_poly_at(p, t0))
        p = dz_derive(p, f.lam)
    anchor = t0 if not isinstance(t0, FloatScalar) and t0 == 1 else None
    z0 = GaussianRational(0) if anchor is not None else _z_of_t(f, t0)
    return Jet(z0, tuple(derivs), anchor_t=t0)


def jet_of(f: CandidateFunction, z0, order: int, precision_bits: int = DEFAULT_PRECISION) -> Jet:
    """(f(z0), f'(z0), ..., f^(order)(z0))."""
    if order < 0:
        raise InvalidParameters("jet order must be >= 0")
    z0 = as_scalar(z0)
    if isinstance(f, AffineFunction):
        zero = f.slope * 0
        derivs = (evaluate(f, z0, precision_bits), f.slope) + (zero,) * (order - 1)
        return Jet(z0, derivs[: order + 1])
    if isinstance(f, ExpPolyFunction):
        t0 = t_of_z(f, z0, precision_bits)
        jet = jet_at_t(f, t0, order)
        return Jet(z0, jet.derivs, anchor_t=t0)
    series = expressions.evaluate(f.ast, TaylorSeries.variable(z0, order), precision_bits)
    if not isinstance(series, TaylorSeries):
        series = TaylorSeries.constant(series, order)
    return Jet(z0, series.derivatives())


def jet_via_series(f: CandidateFunction, z0, order: int, precision_bits: int = DEFAULT_PRECISION) -> Jet:
    """The generic route: propagate a power series through `to_expr(f)`."""
    return jet_of(ExprFunction(to_expr(f)), z0, order, precision_bits)


# ---------- conversions ----------


def to_expr(f: CandidateFunction) -> Node:
    """Closed form of a candidate as an expression tree."""
    if isinstance(f, ExprFunction):
        return f.ast
    if isinstance(f, AffineFunction):
        return BinOp("+", BinOp("*", Literal.of(f.slope), Var()), Literal.of(f.intercept))
    exp_lz = Exp(BinOp("*", Literal.of(f.lam), Var()))
    node = None
    for n, c in enumerate(f.poly.coeffs):
        if not isinstance(c, FloatScalar) and not c:
            continue
        if n == 0:
            term = Literal.of(c)
        else:
            power = exp_lz if n == 1 else Pow(exp_lz, n)
            term = power if c == 1 else BinOp("*", Literal.of(c), power)
        node = term if node is None else BinOp("+", node, term)
    return node if node is not None else Literal.of(0)


def fundamental_period(f: ExpPolyFunction, precision_bits: int = DEFAULT_PRECISION) -> FloatScalar:
    """T = 2 pi i / lam."""
    lam = f.lam.to_float(precision_bits) if not isinstance(f.lam, FloatScalar) else f.lam
    with mpmath.workprec(lam.precision_bits):
        return FloatScalar(2j * mpmath.pi / lam.value, lam.precision_bits)


def _z_of_t(f: ExpPolyFunction, t, precision_bits: int = DEFAULT_PRECISION) -> FieldElement:
    t = as_scalar(t)
    if not isinstance(t, FloatScalar) and t == 1:
        return GaussianRational(0)
    log_t = log_scalar(t, precision_bits)
    lam = f.lam.to_float(log_t.precision_bits) if not isinstance(f.lam, FloatScalar) else f.lam
    return log_t / lam


def z_from_t(f: ExpPolyFunction, t, precision_bits: int = DEFAULT_PRECISION) -> FieldElement:
    """Principal-branch z with e^(lam z) = t; t must be nonzero."""
    if not as_scalar(t):
        raise InvalidParameters("t = 0 is not attained by e^(lam z)")
    return _z_of_t(f, t, precision_bits)


# ---------- candidate documents ----------


@dataclass(frozen=True)
class Candidate:
    function: CandidateFunction
    a: FieldElement | None = None
    b: FieldElement | None = None

    def to_dict(self) -> dict:
        f = self.function
        out: dict = {"kind": f.kind}
        if isinstance(f, AffineFunction):
            out["slope"] = f.slope.serialize()
            out["intercept"] = f.intercept.serialize()
        elif isinstance(f, ExpPolyFunction):
            out["lambda"] = f.lam.serialize()
            out["coeffs"] = f.poly.serialize()
        else:
            out["source"] = str(f)
        if self.a is not None:
            out["a"] = self.a.serialize()
        if self.b is not None:
            out["b"] = self.b.serialize()
        return out

    @staticmethod
    def from_dict(d: dict) -> "Candidate":
        kind = d.get("kind")
        try:
            if kind == "affine":
                f: CandidateFunction = AffineFunction(scalar_field(d["slope"]), scalar_field(d["intercept"]))
            elif kind == "exppoly":
                f = ExpPolyFunction(
                    scalar_field(d["lambda"]),
                    Poly(tuple(scalar_field(c) for c in d["coeffs"])),
                )
            elif kind == "expr":
                f = parse_expr(d["source"])
            else:
                raise InvalidParameters(f"unknown candidate kind {kind!r}")
        except KeyError as e:
            raise InvalidParameters(f"candidate of kind {kind!r} is missing {e.args[0]!r}") from e
        a = d.get("a")
        b = d.get("b")
        return Candidate(
            f,
            scalar_field(a) if a is not None else None,
            scalar_field(b) if b is not None else None,
        )


def scalar_field(value) -> FieldElement:
    if isinstance(value, str):
        return parse_scalar(value)
    if isinstance(value, bool):
        raise InvalidParameters(f"not a scalar: {value!r}")
    if isinstance(value, int):
        return GaussianRational(value)
    if isinstance(value, float):
        # JSON numbers with a fraction part are read as their exact decimal text
        return parse_scalar(repr(value))
    raise InvalidParameters(f"not a scalar: {value!r}")


def load_candidate(path: str | Path) -> Candidate:
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InvalidParameters(f"{p}: not valid JSON ({e})") from e
    return Candidate.from_dict(data)


def dump_candidate(candidate: Candidate, path: str | Path) -> None:
    Path(path).write_text(json.dumps(candidate.to_dict(), ensure_ascii=False, indent=2), encoding="utf-8")
