# recurrence.py
"""
Taylor-jet recurrence for solutions of the differential identity

    f''(f' - f) = c (f - a)(f' - b),        c = (k+1) b / (a - b).

Differentiating the identity n times (Leibniz rule) at an anchor where
f' - f = 0 leaves f^(n+1) as the highest unknown, with a coefficient (the pivot)
that depends only on a, b, k and the anchor kind:

    a-point (f = f' = a)                          (n+1) f'' - n f'
    simple b-point (f = f' = b, f'' = -k b)       (1 - n(k+1)) b
    b-point of f' of multiplicity k+1 (f'' = 0)   (k + 1 - n) b

Given a seed jet, `jet_extend` solves for one derivative after another.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import mpmath

from errors import InvalidParameters, PivotVanished
from scalars import (
    DEFAULT_PRECISION,
    FieldElement,
    FloatScalar,
    GaussianRational,
    as_scalar,
    is_close,
    parse_scalar,
    promote,
    sqrt_scalar,
)
from taylor import Jet, TaylorSeries

logger = logging.getLogger(__name__)


class AnchorKind(str, Enum):
    AT_A_POINT = "a-point"
    AT_SIMPLE_B_POINT = "simple-b-point"
    AT_MULTIPLE_B_POINT = "multiple-b-point"


@dataclass(frozen=True)
class RecurrenceContext:
    a: FieldElement
    b: FieldElement
    k: int
    anchor_kind: AnchorKind = AnchorKind.AT_A_POINT
    relaxed: bool = False

    def __post_init__(self) -> None:
        a, b = as_scalar(self.a), as_scalar(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "anchor_kind", AnchorKind(self.anchor_kind))
        if self.k < 1:
            raise InvalidParameters(f"k must be >= 1, got {self.k}")
        x, y = promote(a, b)
        if not (x - y):
            raise InvalidParameters("a and b must differ")
        if not self.relaxed and (not a or not b):
            raise InvalidParameters("a = 0 or b = 0 needs relaxed mode")

    @property
    def c(self) -> FieldElement:
        a, b = promote(self.a, self.b)
        return (self.k + 1) * b / (a - b)

    def to_float(self, precision_bits: int) -> "RecurrenceContext":
        return RecurrenceContext(
            self.a.to_float(precision_bits),
            self.b.to_float(precision_bits),
            self.k,
            self.anchor_kind,
            self.relaxed,
        )

    def to_dict(self) -> dict:
        return {
            "a": self.a.serialize(),
            "b": self.b.serialize(),
            "k": self.k,
            "c": self.c.serialize(),
            "anchor_kind": self.anchor_kind.value,
            "relaxed": self.relaxed,
        }


# ---------- initial conditions ----------


def fpp_candidates_at_a(
    ctx: RecurrenceContext, precision_bits: int = DEFAULT_PRECISION
) -> tuple[FieldElement, FieldElement]:
    """
    The two admissible values of f'' at an a-point, roots of
    x^2 - a x - (k+1) a b = 0:  a/2 + sqrt(a^2 + 4(k+1)ab)/2  and  a/2 - ... .
    """
    if ctx.anchor_kind is not AnchorKind.AT_A_POINT:
        raise InvalidParameters("f'' candidates are defined at a-points")
    a, b = promote(ctx.a, ctx.b)
    root, demoted = sqrt_scalar(a * a + 4 * (ctx.k + 1) * a * b, precision_bits)
    if demoted:
        a = a.to_float(precision_bits)
    u = a / 2 + root / 2
    v = a / 2 - root / 2
    for value in (u, v):
        if not value:
            logger.warning("f''(z0) = 0 at an a-point contradicts f'' != 0; branch is degenerate")
    return u, v


def fpp_at_simple_b(ctx: RecurrenceContext) -> FieldElement:
    """f'' = -k b at a simple b-point of f'."""
    if ctx.anchor_kind is not AnchorKind.AT_SIMPLE_B_POINT:
        raise InvalidParameters("fpp_at_simple_b needs a simple b-point anchor")
    if not ctx.b:
        logger.warning("b = 0: f'' = 0 at the b-point, the anchor is degenerate")
    return -ctx.k * ctx.b


def seed_at_a(ctx: RecurrenceContext, fpp, anchor=0) -> Jet:
    return Jet(anchor, (ctx.a, ctx.a, fpp))


def seed_at_simple_b(ctx: RecurrenceContext, anchor=0) -> Jet:
    return Jet(anchor, (ctx.b, ctx.b, fpp_at_simple_b(ctx)))


def seed_at_multiple_b(ctx: RecurrenceContext, leading, anchor=0) -> Jet:
    """
    f = f' = b, f'' = ... = f^(k+1) = 0, f^(k+2) = `leading` (nonzero): a zero
    of f'' of order k.
    """
    if not as_scalar(leading):
        raise InvalidParameters("f^(k+2) must be nonzero at a zero of f'' of order k")
    zero = ctx.b * 0
    return Jet(anchor, (ctx.b, ctx.b) + (zero,) * ctx.k + (as_scalar(leading),))


# ---------- pivots ----------


def pivot_C(n: int, fpp, fprime) -> FieldElement:
    """(n+1) f'' - n f', the coefficient of f^(n+1) at an a-point."""
    if n < 2:
        raise InvalidParameters(f"pivot_C needs n >= 2, got {n}")
    fpp, fprime = promote(fpp, fprime)
    return (n + 1) * fpp - n * fprime


def pivot_Ctilde(n: int, ctx: RecurrenceContext) -> FieldElement:
    """(1 - n(k+1)) b, the coefficient of f^(n+1) at a simple b-point."""
    if n < 1:
        raise InvalidParameters(f"pivot_Ctilde needs n >= 1, got {n}")
    return (1 - n * (ctx.k + 1)) * ctx.b


def pivot_multiple_b(n: int, ctx: RecurrenceContext) -> FieldElement:
    """(k + 1 - n) b; vanishes at n = k + 1, where the seed supplies f^(k+2)."""
    return (ctx.k + 1 - n) * ctx.b


def expected_pivot(n: int, ctx: RecurrenceContext, jet_values) -> FieldElement:
    if ctx.anchor_kind is AnchorKind.AT_A_POINT:
        return pivot_C(n, jet_values[2], jet_values[1])
    if ctx.anchor_kind is AnchorKind.AT_SIMPLE_B_POINT:
        return pivot_Ctilde(n, ctx)
    return pivot_multiple_b(n, ctx)


# ---------- the differentiated identity ----------


def identity_derivative(values, n: int, a, b, c) -> FieldElement:
    """
    n-th derivative at the anchor of f''(f' - f) - c (f - a)(f' - b), from the
    derivative values f, f', ..., f^(n+2).
    """

    def second(i):
        return values[i + 2]

    def diff(i):
        return values[i + 1] - values[i]

    def shifted_a(i):
        return values[i] - a if i == 0 else values[i]

    def shifted_b(i):
        return values[i + 1] - b if i == 0 else values[i + 1]

    total = values[0] * 0
    for i in range(n + 1):
        binom = math.comb(n, i)
        total = total + binom * (second(i) * diff(n - i) - c * shifted_a(i) * shifted_b(n - i))
    return total


def _is_zero(x: FieldElement, tol: float) -> bool:
    if isinstance(x, FloatScalar):
        return x.magnitude() <= tol
    return not x


def jet_extend(
    seed: Jet,
    ctx: RecurrenceContext,
    order: int,
    tol: float = 1e-24,
    precision_bits: int = DEFAULT_PRECISION,
) -> Jet:
    """
    Extend `seed` to a jet of the given order by solving the n-th derivative of
    the identity for f^(n+1), n = 2, ..., order - 1. Seed entries beyond f''
    are kept and checked instead of solved for.
    """
    if order < 2:
        raise InvalidParameters(f"order must be >= 2, got {order}")
    if seed.order < 2:
        raise InvalidParameters("seed must contain f, f' and f''")

    values = list(seed.derivs)
    if any(isinstance(v, FloatScalar) for v in values) or any(
        isinstance(v, FloatScalar) for v in (ctx.a, ctx.b)
    ):
        prec = min(
            [v.precision_bits for v in values + [ctx.a, ctx.b] if isinstance(v, FloatScalar)]
            or [precision_bits]
        )
        values = [v if isinstance(v, FloatScalar) else v.to_float(prec) for v in values]
        ctx = ctx.to_float(prec)
    a, b, c = ctx.a, ctx.b, ctx.c
    zero = values[0] * 0
    one = zero + 1

    # anchor contract: f' - f = 0 and the identity and its first derivative vanish
    if not _is_zero(values[1] - values[0], tol):
        raise InvalidParameters("seed violates f'(z0) = f(z0)")

    def residual(n: int, unknown, top) -> FieldElement:
        padded = values[: n + 1] + [unknown, top]
        return identity_derivative(padded, n, a, b, c)

    for n in (0, 1):
        full = values[: n + 3] + [zero] * max(0, n + 3 - len(values))
        if not _is_zero(identity_derivative(full, n, a, b, c), _tol_scale(tol, values)):
            raise InvalidParameters(f"seed violates the identity at derivative order {n}")

    for n in range(2, order):
        base = residual(n, zero, zero)
        pivot = residual(n, one, zero) - base
        top_coefficient = residual(n, zero, one) - base
        if not _is_zero(top_coefficient, tol):
            raise ArithmeticError(f"coefficient of f^({n + 2}) is {top_coefficient}, expected f' - f = 0")
        expected = expected_pivot(n, ctx, values)
        if not _is_zero(pivot - expected, _tol_scale(tol, values)):
            raise ArithmeticError(f"pivot {pivot} at n={n} differs from the closed form {expected}")

        if n + 1 < len(values):
            # supplied by the seed: check consistency
            if not _is_zero(base + pivot * values[n + 1], _tol_scale(tol, values)):
                raise InvalidParameters(f"seed entry f^({n + 1}) is inconsistent with the identity")
            continue
        if _is_zero(pivot, _tol_scale(tol, values)):
            raise PivotVanished(n, ctx.k, ctx.a, ctx.b)
        values.append(-base / pivot)
        logger.debug("jet_extend: f^(%d) = %s", n + 1, values[-1])

    return Jet(seed.anchor, tuple(values[: order + 1]), anchor_t=seed.anchor_t)


def _tol_scale(tol: float, values) -> float:
    floats = [v.magnitude() for v in values if isinstance(v, FloatScalar)]
    if not floats:
        return tol
    return tol * float(max([mpmath.mpf(1)] + floats)) ** 2


def jet_match(j1: Jet, j2: Jet, upto: int, tol: float = 1e-24) -> bool:
    """Entrywise agreement of f, ..., f^(upto)."""
    if j1.order < upto or j2.order < upto:
        raise InvalidParameters(f"both jets need order >= {upto}")
    return j1.truncate(upto).first_mismatch(j2.truncate(upto), tol) is None


# ---------- the exceptional case ----------


def relation_a_from_b(n: int, k: int, b) -> FieldElement:
    """a = -(n+1)^2 (k+1) b / n, the only a for which pivot_C vanishes at step n."""
    if n < 1:
        raise InvalidParameters(f"n must be >= 1, got {n}")
    return -(n + 1) ** 2 * (k + 1) * as_scalar(b) / n


def vanishing_pivot_index(a, b, k: int) -> int | None:
    """The unique n >= 2 with a = -(n+1)^2 (k+1) b / n, if there is one."""
    a, b = as_scalar(a), as_scalar(b)
    if isinstance(a, FloatScalar) or isinstance(b, FloatScalar) or not b:
        return None
    q = -a / ((k + 1) * b)
    if not q.is_real or q.re <= 0:
        return None
    q = q.re
    # (n+1)^2 / n = q  <=>  n^2 + (2 - q) n + 1 = 0; the larger root is the candidate
    disc = (q - 2) ** 2 - 4
    if disc < 0:
        return None
    num, den = disc.numerator, disc.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    n = ((q - 2) + Fraction(rn, rd)) / 2
    if n.denominator != 1 or n < 2:
        return None
    return int(n)


def lambda2_squared(n: int, k: int, a, b) -> FieldElement:
    """n^2 / (4 (n+1)^2) + (n / (n+1)) b / (a - b)."""
    a, b = promote(a, b)
    return Fraction(n * n, 4 * (n + 1) ** 2) + Fraction(n, n + 1) * b / (a - b)


def sinh_exceptional_params(
    n: int, k: int, a, b, precision_bits: int = DEFAULT_PRECISION
) -> tuple[FieldElement, FieldElement]:
    """
    (lambda1, lambda2) of the exceptional family c e^(lambda1 z) sinh(lambda2 z) + a.
    lambda2 is exact only when lambda2^2 is a Gaussian-rational square.
    """
    if n < 2 or k < 1:
        raise InvalidParameters(f"need n >= 2 and k >= 1, got n={n}, k={k}")
    lam1 = GaussianRational(Fraction(n, 2 * (n + 1)))
    lam2, demoted = sqrt_scalar(lambda2_squared(n, k, a, b), precision_bits)
    if demoted:
        lam1 = lam1.to_float(precision_bits)
    return lam1, lam2


def exceptional_a_point_phases(ratio, j_max: int = 12) -> list[tuple[int, bool]]:
    """
    For f = c e^(l1 z) sinh(l2 z) + a the a-points are z_j = i j pi / l2 and
    f'(z_j) = a e^(l1 z_j) (-1)^j. With r = l1 / l2 this equals a iff
    e^(i pi r j) = (-1)^j, i.e. (r - 1) j is an even integer. Returns (j, holds).
    """
    r = as_scalar(ratio)
    if isinstance(r, FloatScalar) or not r.is_real:
        raise InvalidParameters("the phase test needs a real rational ratio l1 / l2")
    out = []
    for j in range(-j_max, j_max + 1):
        x = (r.re - 1) * j
        out.append((j, x.denominator == 1 and x.numerator % 2 == 0))
    return out


def all_phases_match(ratio, j_max: int = 12) -> bool:
    """True exactly for odd integer ratios."""
    return all(ok for _, ok in exceptional_a_point_phases(ratio, j_max))


# ---------- local expansion at a zero of f'' ----------


def local_expansion_g_limit(a, b, k: int, leading, order_extra: int = 2) -> FieldElement:
    """
    Limit of g = f''(f' - f) / ((f - a)(f' - b)) at a zero z0 of f'' of order k,
    using f(z0) = f'(z0) = b and f'' = leading (z - z0)^k + ... . Equals
    (k+1) b / (a - b).
    """
    a, b = promote(a, b)
    leading = as_scalar(leading)
    if not leading:
        raise InvalidParameters("the leading coefficient of f'' must be nonzero")
    zero = b * 0
    # f^(k+2)(z0) = k! * leading; higher entries are free and set to 0
    derivs = [b, b] + [zero] * k + [math.factorial(k) * leading] + [zero] * order_extra
    f = TaylorSeries.from_derivatives(derivs)
    order = f.order
    fp = TaylorSeries(tuple((m + 1) * f.coeffs[m + 1] for m in range(order)))
    fpp = TaylorSeries(tuple((m + 1) * fp.coeffs[m + 1] for m in range(order - 1)))
    num = fpp * (fp - f)
    den = (f - a) * (fp - b)
    for m in range(min(num.order, den.order) + 1):
        if den.coeffs[m]:
            if any(num.coeffs[i] for i in range(m)):
                raise ArithmeticError("numerator vanishes to lower order than the denominator")
            return num.coeffs[m] / den.coeffs[m]
    raise ArithmeticError("denominator vanishes to the truncation order")


def matches_expected_g(value, a, b, k: int, tol: float = 1e-24) -> bool:
    a, b = promote(a, b)
    return is_close(value, (k + 1) * b / (a - b), tol)


# ---------- reports ----------


@dataclass(frozen=True)
class JetReport:
    context: RecurrenceContext
    seed: Jet
    jet: Jet
    oracle: Jet | None = None
    first_mismatch: int | None = None

    @property
    def matches(self) -> bool | None:
        if self.oracle is None:
            return None
        return self.first_mismatch is None

    def to_dict(self) -> dict:
        return {
            "context": self.context.to_dict(),
            "seed": self.seed.to_dict(),
            "jet": self.jet.to_dict(),
            "oracle": self.oracle.to_dict() if self.oracle is not None else None,
            "first_mismatch": self.first_mismatch,
            "matches": self.matches,
        }

    @staticmethod
    def from_dict(d: dict) -> "JetReport":
        ctx = d["context"]
        oracle = d.get("oracle")
        return JetReport(
            context=RecurrenceContext(
                parse_scalar(ctx["a"]),
                parse_scalar(ctx["b"]),
                ctx["k"],
                AnchorKind(ctx["anchor_kind"]),
                ctx.get("relaxed", False),
            ),
            seed=Jet.from_dict(d["seed"]),
            jet=Jet.from_dict(d["jet"]),
            oracle=Jet.from_dict(oracle) if oracle is not None else None,
            first_mismatch=d.get("first_mismatch"),
        )


def jet_report(
    seed: Jet,
    ctx: RecurrenceContext,
    order: int,
    oracle: Jet | None = None,
    tol: float = 1e-24,
    precision_bits: int = DEFAULT_PRECISION,
) -> JetReport:
    """Extend `seed` and, when a closed-form jet is given, compare through `order`."""
    jet = jet_extend(seed, ctx, order, tol, precision_bits)
    mismatch = None
    if oracle is not None:
        upto = min(order, oracle.order)
        mismatch = jet.truncate(upto).first_mismatch(oracle.truncate(upto), _tol_scale(tol, oracle.derivs))
    return JetReport(ctx, seed, jet, oracle, mismatch)
