# verifier.py
"""
Checks whether a candidate solves the value-sharing problem

    f(z) = a  =>  f'(z) = a        and        f'(z) = b  =>  f(z) = b.

Exponential-polynomial candidates are decided completely in t = e^(lam z): the
a-points of f are the nonzero roots of P(t) - a, the b-points of f' the roots of
dz P(t) - b. Affine candidates are decided by direct algebra. Closed-form
expressions are only searched on a grid (Newton from every node); those reports
are region-local.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable

import mpmath

from errors import (
    AllSamplesDegenerate,
    DegenerateCandidate,
    InvalidParameters,
    MixedRegime,
    NewtonBudgetExceeded,
)
from functions import (
    AffineFunction,
    CandidateFunction,
    ExpPolyFunction,
    ExprFunction,
    eval_poly_at,
    jet_of,
)
from polynomials import Poly, Root, poly_divmod, poly_gcd, poly_roots
from scalars import (
    DEFAULT_PRECISION,
    FieldElement,
    FloatScalar,
    GaussianRational,
    Regime,
    as_scalar,
    is_close,
    parse_scalar,
    promote,
)

logger = logging.getLogger(__name__)

EXIT_HOLDS = 0
EXIT_VIOLATED = 1
EXIT_REGION_LOCAL = 2


@dataclass(frozen=True)
class SharingProblem:
    a: FieldElement
    b: FieldElement
    relaxed: bool = False

    def __post_init__(self) -> None:
        a, b = as_scalar(self.a), as_scalar(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if _same(a, b):
            raise InvalidParameters(f"a and b must differ (a = b = {a})")
        if not self.relaxed and (not a or not b):
            raise InvalidParameters("a = 0 or b = 0 needs relaxed mode")

    def expected_g(self, k: int) -> FieldElement:
        """(k+1) b / (a - b)."""
        a, b = promote(self.a, self.b)
        return (k + 1) * b / (a - b)

    def to_float(self, precision_bits: int) -> "SharingProblem":
        return replace(self, a=self.a.to_float(precision_bits), b=self.b.to_float(precision_bits))


def _is_float(*values) -> bool:
    return any(isinstance(v, FloatScalar) for v in values)


def _same(x, y, tol: float = 1e-30) -> bool:
    """Exact equality, or closeness once a float is involved."""
    x, y = as_scalar(x), as_scalar(y)
    if _is_float(x, y):
        return is_close(x, y, tol)
    return x == y


def _float_jet(f: CandidateFunction, z, order: int, precision_bits: int) -> list[FloatScalar]:
    jet = jet_of(f, as_scalar(z).to_float(precision_bits), order, precision_bits)
    return [d if isinstance(d, FloatScalar) else d.to_float(precision_bits) for d in jet.derivs]


# ---------- report types ----------


@dataclass(frozen=True)
class Witness:
    location: FieldElement
    coordinate: str  # "t" or "z"
    implication: str  # "a" (f=a => f'=a) or "b" (f'=b => f=b)
    lhs: FieldElement
    rhs: FieldElement
    defect: object

    def to_dict(self) -> dict:
        return {
            "location": self.location.serialize(),
            "coordinate": self.coordinate,
            "implication": self.implication,
            "lhs": self.lhs.serialize(),
            "rhs": self.rhs.serialize(),
            "defect": str(self.defect),
        }

    @staticmethod
    def from_dict(d: dict) -> "Witness":
        return Witness(
            location=parse_scalar(d["location"]),
            coordinate=d["coordinate"],
            implication=d["implication"],
            lhs=parse_scalar(d["lhs"]),
            rhs=parse_scalar(d["rhs"]),
            defect=d["defect"],
        )


@dataclass(frozen=True)
class CountingData:
    d: int
    j: int
    k: int | None
    n_a: int
    nbar_a: int
    n_b_fprime: int
    nbar_b_fprime: int
    n_0_fpp: int

    def violations(self) -> list[str]:
        """Counting identities a genuine solution with zeros of f'' satisfies."""
        out = []
        if not 1 <= self.j < self.d:
            out.append(f"need 1 <= j < d, got j={self.j}, d={self.d}")
        if not self.n_a == self.nbar_a == self.d - self.j:
            out.append(f"need n_a = nbar_a = d - j = {self.d - self.j}, got {self.n_a}, {self.nbar_a}")
        if self.n_0_fpp != self.d - self.j:
            out.append(f"need n_0(f'') = d - j = {self.d - self.j}, got {self.n_0_fpp}")
        if self.n_b_fprime != self.d:
            out.append(f"need n_b(f') = d = {self.d}, got {self.n_b_fprime}")
        if self.nbar_b_fprime != self.j:
            out.append(f"need nbar_b(f') = j = {self.j}, got {self.nbar_b_fprime}")
        if not 2 * self.j <= self.d <= 3 * self.j:
            out.append(f"need 2j <= d <= 3j, got d={self.d}, j={self.j}")
        return out

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    @staticmethod
    def from_dict(d: dict) -> "CountingData":
        return CountingData(**d)


@dataclass(frozen=True)
class ImplicationCheck:
    holds: bool
    witnesses: tuple[Witness, ...] = ()
    points_checked: int = 0
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class VerificationReport:
    candidate: str
    a: FieldElement
    b: FieldElement
    holds_a_implies: bool
    holds_b_implies: bool
    witnesses: tuple[Witness, ...] = ()
    g_constant_estimate: FieldElement | None = None
    g_max_deviation: object = None
    counts: CountingData | None = None
    relaxed: bool = False
    region_local: bool = False
    warnings: tuple[str, ...] = ()
    newton_failures: int = 0

    @property
    def holds(self) -> bool:
        return self.holds_a_implies and self.holds_b_implies

    @property
    def exit_code(self) -> int:
        if not self.holds:
            return EXIT_VIOLATED
        return EXIT_REGION_LOCAL if self.region_local else EXIT_HOLDS

    def to_dict(self) -> dict:
        return {
            "candidate": self.candidate,
            "a": self.a.serialize(),
            "b": self.b.serialize(),
            "holds": self.holds,
            "holds_a_implies": self.holds_a_implies,
            "holds_b_implies": self.holds_b_implies,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "g_constant_estimate": (
                self.g_constant_estimate.serialize() if self.g_constant_estimate is not None else None
            ),
            "g_max_deviation": str(self.g_max_deviation) if self.g_max_deviation is not None else None,
            "counts": self.counts.to_dict() if self.counts else None,
            "relaxed": self.relaxed,
            "region_local": self.region_local,
            "warnings": list(self.warnings),
            "newton_failures": self.newton_failures,
        }

    @staticmethod
    def from_dict(d: dict) -> "VerificationReport":
        g = d.get("g_constant_estimate")
        counts = d.get("counts")
        return VerificationReport(
            candidate=d["candidate"],
            a=parse_scalar(d["a"]),
            b=parse_scalar(d["b"]),
            holds_a_implies=d["holds_a_implies"],
            holds_b_implies=d["holds_b_implies"],
            witnesses=tuple(Witness.from_dict(w) for w in d.get("witnesses", [])),
            g_constant_estimate=parse_scalar(g) if g is not None else None,
            g_max_deviation=d.get("g_max_deviation"),
            counts=CountingData.from_dict(counts) if counts else None,
            relaxed=d.get("relaxed", False),
            region_local=d.get("region_local", False),
            warnings=tuple(d.get("warnings", [])),
            newton_failures=d.get("newton_failures", 0),
        )


# ---------- regime alignment ----------


def align_regimes(
    f: CandidateFunction, prob: SharingProblem, precision_bits: int = DEFAULT_PRECISION
) -> tuple[CandidateFunction, SharingProblem]:
    """Move candidate and problem to float together if either side is float."""
    if isinstance(f, ExpPolyFunction):
        f_float = f.poly.regime is Regime.FLOAT or isinstance(f.lam, FloatScalar)
        if f_float or _is_float(prob.a, prob.b):
            f = ExpPolyFunction(f.lam.to_float(precision_bits), f.poly.to_float(precision_bits))
            prob = prob.to_float(precision_bits)
    elif isinstance(f, AffineFunction) and _is_float(f.slope, f.intercept, prob.a, prob.b):
        f = AffineFunction(f.slope.to_float(precision_bits), f.intercept.to_float(precision_bits))
        prob = prob.to_float(precision_bits)
    return f, prob


def _check_tol(root: Root, tol: float) -> float:
    # a root of multiplicity m is only resolved to about tol ** (1/m)
    if root.is_exact:
        return tol
    return max(tol, 10 * tol ** (1.0 / root.multiplicity))


def _defect(lhs: FieldElement, rhs: FieldElement) -> object:
    x, y = promote(lhs, rhs)
    return (x - y).magnitude()


def _nonzero_roots(
    p: Poly, tol: float, precision_bits: int, maxiter: int
) -> tuple[list[Root], int, list[str]]:
    """Roots of p split into (roots with t != 0, multiplicity at t = 0, warnings)."""
    roots = poly_roots(p, tol, precision_bits, maxiter)
    warnings = []
    at_zero = roots.multiplicity_at_zero()
    kept = []
    for r in roots.roots:
        if r.is_exact:
            if r.location:
                kept.append(r)
            continue
        if r.location.magnitude() <= tol:
            msg = f"root {r.location} within tol of t=0 counted as t=0; re-run in the exact regime"
            logger.warning(msg)
            warnings.append(msg)
            at_zero += r.multiplicity
        else:
            kept.append(r)
    return kept, at_zero, warnings


# ---------- implications for exponential polynomials ----------


def _check_implication(
    source: Poly,
    target: Poly,
    value: FieldElement,
    implication: str,
    tol: float,
    precision_bits: int,
    maxiter: int,
) -> ImplicationCheck:
    """At every nonzero root of source - value, target must equal value."""
    roots, _, warnings = _nonzero_roots(source - value, tol, precision_bits, maxiter)
    witnesses = []
    for r in roots:
        lhs = eval_poly_at(target, r.location)
        check = _check_tol(r, tol)
        if not is_close(lhs, value, check):
            witnesses.append(Witness(r.location, "t", implication, lhs, value, _defect(lhs, value)))
    return ImplicationCheck(not witnesses, tuple(witnesses), len(roots), tuple(warnings))


def check_implication_a(
    f: ExpPolyFunction,
    prob: SharingProblem,
    tol: float = 1e-24,
    precision_bits: int = DEFAULT_PRECISION,
    maxiter: int = 500,
) -> ImplicationCheck:
    """f = a => f' = a, over all a-points (nonzero roots of P - a)."""
    if f.poly.degree < 1:
        raise DegenerateCandidate("P is constant")
    f, prob = align_regimes(f, prob, precision_bits)
    return _check_implication(f.poly, f.derivative_poly(1), prob.a, "a", tol, precision_bits, maxiter)


def check_implication_b(
    f: ExpPolyFunction,
    prob: SharingProblem,
    tol: float = 1e-24,
    precision_bits: int = DEFAULT_PRECISION,
    maxiter: int = 500,
) -> ImplicationCheck:
    """f' = b => f = b, over all b-points of f' (nonzero roots of dz P - b)."""
    if f.poly.degree < 1:
        raise DegenerateCandidate("P is constant")
    f, prob = align_regimes(f, prob, precision_bits)
    return _check_implication(f.derivative_poly(1), f.poly, prob.b, "b", tol, precision_bits, maxiter)


# ---------- affine candidates ----------


def check_affine(
    f: AffineFunction, prob: SharingProblem, precision_bits: int = DEFAULT_PRECISION
) -> tuple[ImplicationCheck, ImplicationCheck]:
    """Direct algebra: f' is the constant slope."""
    f, prob = align_regimes(f, prob, precision_bits)
    s, B = f.slope, f.intercept
    a, b = prob.a, prob.b
    zero = s * 0

    # f = a
    if s:
        holds = _same(s, a)
        witness = Witness((a - B) / s, "z", "a", s, a, _defect(s, a))
        check_a = ImplicationCheck(holds, () if holds else (witness,), 1)
    elif _same(B, a):
        # every z is an a-point and f' = 0 there
        holds = not a
        witness = Witness(zero, "z", "a", zero, a, _defect(zero, a))
        check_a = ImplicationCheck(holds, () if holds else (witness,), 1)
    else:
        check_a = ImplicationCheck(True)

    # f' = b
    if _same(s, b):
        # every z is a b-point of f'; f = b everywhere only for the constant b
        holds = not s and _same(B, b)
        z_wit = zero + 1 if _same(B, b) else zero
        value = s * z_wit + B
        witness = Witness(z_wit, "z", "b", value, b, _defect(value, b))
        check_b = ImplicationCheck(holds, () if holds else (witness,), 1)
    else:
        check_b = ImplicationCheck(True)
    return check_a, check_b


# ---------- the constant of the differential identity ----------


def g_value(f0, f1, f2, a, b, tol: float = 1e-24) -> FieldElement | None:
    """g = f''(f' - f) / ((f - a)(f' - b)); None on a (near-)vanishing denominator."""
    values = [as_scalar(v) for v in (f0, f1, f2, a, b)]
    if _is_float(*values):
        prec = min(v.precision_bits for v in values if isinstance(v, FloatScalar))
        values = [v if isinstance(v, FloatScalar) else v.to_float(prec) for v in values]
    f0, f1, f2, a, b = values
    den = (f0 - a) * (f1 - b)
    if isinstance(den, FloatScalar):
        scale = max(mpmath.mpf(1), (f0.magnitude() + a.magnitude()) * (f1.magnitude() + b.magnitude()))
        if den.magnitude() <= mpmath.sqrt(tol) * scale:
            return None
    elif not den:
        return None
    return f2 * (f1 - f0) / den


def _exact_sample_points(count: int) -> Iterable[GaussianRational]:
    """Gaussian-rational points spread over the annulus 1/2 <= |t| <= 3/2."""
    n = 0
    while True:
        s = Fraction(2 * n + 1, 2 * count + 3) * 4 - 2
        unit = GaussianRational((1 - s * s) / (1 + s * s), 2 * s / (1 + s * s))
        radius = Fraction(1, 2) + Fraction(n % (count + 1), count + 1)
        yield unit * radius
        n += 1


def _float_sample_points(count: int, precision_bits: int, radius_scale=1) -> Iterable[FloatScalar]:
    n = 0
    with mpmath.workprec(precision_bits):
        while True:
            theta = 2 * mpmath.pi * n / max(count, 1) + mpmath.mpf("0.3") + n // max(count, 1)
            radius = mpmath.mpf(1) / 2 + mpmath.mpf(n % (count + 1)) / (count + 1)
            yield FloatScalar(radius * radius_scale * mpmath.expj(theta), precision_bits)
            n += 1


def check_g_constant(
    f: CandidateFunction,
    prob: SharingProblem,
    samples: int = 16,
    tol: float = 1e-24,
    precision_bits: int = DEFAULT_PRECISION,
    budget_factor: int = 10,
) -> tuple[FieldElement, object]:
    """
    Sample g over an annulus in t (ExpPoly) or a disk in z (others) and return
    (mean, max deviation from the mean).
    """
    if samples < 1:
        raise InvalidParameters("samples must be positive")
    f, prob = align_regimes(f, prob, precision_bits)

    exact = False
    if isinstance(f, ExpPolyFunction):
        exact = f.poly.regime is not Regime.FLOAT and not _is_float(f.lam, prob.a, prob.b)
        polys = (f.poly, f.derivative_poly(1), f.derivative_poly(2))
        points = _exact_sample_points(samples) if exact else _float_sample_points(samples, precision_bits)

        def jet(p):
            return [eval_poly_at(q, p) for q in polys]
    else:
        if isinstance(f, AffineFunction):
            exact = not _is_float(f.slope, f.intercept, prob.a, prob.b)
        points = _exact_sample_points(samples) if exact else _float_sample_points(samples, precision_bits, 2)

        def jet(p):
            return list(jet_of(f, p, 2, precision_bits).derivs)

    values: list[FieldElement] = []
    attempts = 0
    for point in points:
        if len(values) >= samples:
            break
        attempts += 1
        if attempts > samples * budget_factor:
            raise AllSamplesDegenerate(
                f"only {len(values)} of {samples} samples avoided the zeros of (f-a)(f'-b)"
            )
        f0, f1, f2 = jet(point)
        g = g_value(f0, f1, f2, prob.a, prob.b, tol)
        if g is None:
            logger.debug("g sample at %s hit a degenerate denominator; resampling", point)
            continue
        values.append(g)

    if any(isinstance(v, FloatScalar) for v in values):
        values = [v if isinstance(v, FloatScalar) else v.to_float(precision_bits) for v in values]
    total = values[0] * 0
    for v in values:
        total = total + v
    mean = total / len(values)
    max_dev = max((v - mean).magnitude() for v in values)
    return mean, max_dev


# ---------- counting data ----------


def counting(
    f: ExpPolyFunction,
    prob: SharingProblem,
    tol: float = 1e-24,
    precision_bits: int = DEFAULT_PRECISION,
    maxiter: int = 500,
) -> CountingData:
    """Root counts of P - a, dz P - b and dz^2 P over one fundamental domain (t != 0)."""
    if f.poly.degree < 1:
        raise DegenerateCandidate("P is constant")
    f, prob = align_regimes(f, prob, precision_bits)
    a_roots, j, _ = _nonzero_roots(f.poly - prob.a, tol, precision_bits, maxiter)
    b_roots, _, _ = _nonzero_roots(f.derivative_poly(1) - prob.b, tol, precision_bits, maxiter)
    fpp_roots, _, _ = _nonzero_roots(f.derivative_poly(2), tol, precision_bits, maxiter)
    orders = {r.multiplicity for r in fpp_roots}
    if len(orders) > 1:
        logger.info("zeros of f'' have differing orders %s; k reported as none", sorted(orders))
    return CountingData(
        d=f.degree,
        j=j,
        k=orders.pop() if len(orders) == 1 else None,
        n_a=sum(r.multiplicity for r in a_roots),
        nbar_a=len(a_roots),
        n_b_fprime=sum(r.multiplicity for r in b_roots),
        nbar_b_fprime=len(b_roots),
        n_0_fpp=sum(r.multiplicity for r in fpp_roots),
    )


# ---------- h1 and h2 ----------


@dataclass(frozen=True)
class RationalFunction:
    numerator: Poly
    denominator: Poly

    @property
    def degree(self) -> int:
        return int(max(self.numerator.degree, self.denominator.degree))

    @property
    def pole_at_zero(self) -> bool:
        return self.denominator.valuation() > 0

    @property
    def pole_at_infinity(self) -> bool:
        return self.numerator.degree > self.denominator.degree


def reduce_rational(numerator: Poly, denominator: Poly) -> RationalFunction:
    """Cancel the exact GCD; exact regimes only."""
    if Regime.FLOAT in (numerator.regime, denominator.regime):
        raise MixedRegime(Regime.FLOAT.value, Regime.EXACT.value)
    g = poly_gcd(numerator, denominator)
    if g.degree >= 1:
        numerator = poly_divmod(numerator, g)[0]
        denominator = poly_divmod(denominator, g)[0]
    return RationalFunction(numerator, denominator)


def h1(f: ExpPolyFunction, prob: SharingProblem) -> RationalFunction:
    """h1 = lam t P' / (P - a) = f' / (f - a), reduced."""
    return reduce_rational(f.derivative_poly(1), f.poly - prob.a)


def h1_degree(f: ExpPolyFunction, prob: SharingProblem) -> int:
    """Degree of h1 as a rational function of t; equals d - j for solutions."""
    return h1(f, prob).degree


def h2(f: ExpPolyFunction, prob: SharingProblem) -> RationalFunction:
    """h2 = f'' / (f' - b), reduced."""
    return reduce_rational(f.derivative_poly(2), f.derivative_poly(1) - prob.b)


def h2_pole_orders(
    f: ExpPolyFunction, prob: SharingProblem, tol: float = 1e-24, precision_bits: int = DEFAULT_PRECISION
) -> list[tuple[FieldElement, int]]:
    """(location, order) for every pole of h2; all orders are 1 for solutions."""
    reduced = h2(f, prob)
    if reduced.denominator.degree < 1:
        return []
    roots = poly_roots(reduced.denominator, tol, precision_bits)
    return [(r.location, r.multiplicity) for r in roots.roots]


# ---------- spherical derivative ----------


@dataclass(frozen=True)
class Region:
    x_min: object
    x_max: object
    y_min: object
    y_max: object

    def __post_init__(self) -> None:
        for name in ("x_min", "x_max", "y_min", "y_max"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.x_min >= self.x_max or self.y_min >= self.y_max:
            raise InvalidParameters(f"empty region {self}")

    @classmethod
    def square(cls, lo, hi) -> "Region":
        return cls(lo, hi, lo, hi)

    @classmethod
    def parse(cls, text: str) -> "Region":
        """"x0,x1,y0,y1"."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise InvalidParameters(f"region needs four numbers x0,x1,y0,y1, got {text!r}")
        try:
            return cls(*(Fraction(p) for p in parts))
        except ValueError as e:
            raise InvalidParameters(f"bad region {text!r}: {e}") from e

    def nodes(self, grid: int) -> list[GaussianRational]:
        if grid < 2:
            raise InvalidParameters("grid must be >= 2 per side")
        dx = (self.x_max - self.x_min) / (grid - 1)
        dy = (self.y_max - self.y_min) / (grid - 1)
        return [
            GaussianRational(self.x_min + i * dx, self.y_min + k * dy)
            for i in range(grid)
            for k in range(grid)
        ]

    def contains(self, z: FieldElement, margin: float = 0.0) -> bool:
        zf = as_scalar(z).to_float(53).value
        return (
            float(self.x_min) - margin <= float(zf.real) <= float(self.x_max) + margin
            and float(self.y_min) - margin <= float(zf.imag) <= float(self.y_max) + margin
        )

    @property
    def diameter(self) -> float:
        return float(max(self.x_max - self.x_min, self.y_max - self.y_min))

    def to_dict(self) -> dict:
        return {k: str(getattr(self, k)) for k in ("x_min", "x_max", "y_min", "y_max")}


@dataclass(frozen=True)
class ScanResult:
    max_value: object
    argmax: FieldElement
    region: Region
    grid: int

    def to_dict(self) -> dict:
        return {
            "max_spherical_derivative": mpmath.nstr(self.max_value, 15),
            "argmax": self.argmax.serialize(),
            "region": self.region.to_dict(),
            "grid": self.grid,
        }


def spherical_derivative(f: CandidateFunction, z, precision_bits: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """f#(z) = |f'(z)| / (1 + |f(z)|^2)."""
    f0, f1 = _float_jet(f, z, 1, precision_bits)
    with mpmath.workprec(precision_bits):
        return f1.magnitude() / (1 + f0.magnitude() ** 2)


SCAN_SPACING = Fraction(1, 24)


def spherical_scan(
    f: CandidateFunction,
    region: Region,
    grid: int | None = None,
    precision_bits: int = 64,
    spacing: Fraction = SCAN_SPACING,
) -> ScanResult:
    """
    Max of f# over a grid x grid lattice of the region. Without an explicit
    `grid` the lattice keeps a fixed `spacing`, so larger regions get more nodes
    and peaks of width ~1/|f'| stay resolved as the region grows.
    """
    if grid is None:
        grid = math.ceil(Fraction(region.diameter) / Fraction(spacing)) + 1
    best = mpmath.mpf(-1)
    best_z: FieldElement = GaussianRational(0)
    for z in region.nodes(grid):
        value = spherical_derivative(f, z, precision_bits)
        if value > best:
            best, best_z = value, z
    return ScanResult(best, best_z, region, grid)


# ---------- grid search for closed forms ----------


@dataclass
class _NewtonStats:
    failures: int = 0
    converged: int = 0
    budget_errors: list = field(default_factory=list)


def _newton(
    f: CandidateFunction,
    seed: FieldElement,
    order: int,
    target: FieldElement,
    tol: float,
    precision_bits: int,
    maxiter: int,
    escape_radius: float,
) -> FloatScalar:
    """
    Solve f^(order)(z) = target from `seed`.

    A candidate is returned only once `_confirm_root` accepts it at raised
    precision: near an asymptotic value (exp(z^3) - 1 -> -1 as Re z^3 -> -oo)
    the residual cancels to an exact zero at working precision although no
    root is near.
    """
    exact_target = as_scalar(target)
    z = as_scalar(seed).to_float(precision_bits)
    target = exact_target.to_float(precision_bits)
    step_eps = mpmath.mpf(2) ** (-(precision_bits // 2))
    residual_eps = mpmath.sqrt(tol) * max(mpmath.mpf(1), target.magnitude())
    for _ in range(maxiter):
        jet = _float_jet(f, z, order + 1, precision_bits)
        value = jet[order] - target
        slope = jet[order + 1]
        if value.is_zero():
            if _confirm_root(f, z, order, exact_target, precision_bits):
                return z
            break
        if slope.is_zero():
            break
        step = value / slope
        z = z - step
        if z.magnitude() > escape_radius:
            break
        if step.magnitude() <= step_eps * max(mpmath.mpf(1), z.magnitude()) and (
            (_float_jet(f, z, order, precision_bits)[order] - target).magnitude() <= residual_eps
        ):
            if _confirm_root(f, z, order, exact_target, precision_bits):
                return z
            break
    raise NewtonBudgetExceeded(seed, maxiter)


def _confirm_root(
    f: CandidateFunction, z: FloatScalar, order: int, target: FieldElement, precision_bits: int
) -> bool:
    """
    The Newton step from `z` must be negligible at raised precision. An exact
    zero residual raises the precision again, up to 16x, before it is believed.
    """
    bits = 2 * precision_bits
    while True:
        jet = _float_jet(f, z, order + 1, bits)
        value = jet[order] - target.to_float(bits)
        if not value.is_zero():
            break
        if bits >= 16 * precision_bits:
            return True
        bits *= 2
    slope = jet[order + 1]
    if slope.is_zero():
        return False
    step = (value / slope).magnitude()
    return step <= mpmath.mpf(2) ** (-(precision_bits // 4)) * max(mpmath.mpf(1), z.magnitude())


def _dedupe(points: list[FloatScalar], radius: float) -> list[FloatScalar]:
    kept: list[FloatScalar] = []
    for p in points:
        if all((p - q).magnitude() > radius * max(1, q.magnitude()) for q in kept):
            kept.append(p)
    return kept


def _grid_search(
    f: CandidateFunction,
    order: int,
    target: FieldElement,
    region: Region,
    grid: int,
    tol: float,
    precision_bits: int,
    maxiter: int,
    stats: _NewtonStats,
) -> list[FloatScalar]:
    found = []
    corners = (region.x_min, region.x_max, region.y_min, region.y_max)
    escape = 10 * (region.diameter + 1) + max(abs(float(v)) for v in corners)
    for node in region.nodes(grid):
        try:
            z = _newton(f, node, order, target, tol, precision_bits, maxiter, escape)
        except NewtonBudgetExceeded as e:
            logger.debug("%s", e)
            stats.failures += 1
            continue
        stats.converged += 1
        if region.contains(z, margin=1e-9):
            found.append(z)
    return _dedupe(found, tol ** 0.5)


def grid_verify_expr(
    f: CandidateFunction,
    prob: SharingProblem,
    region: Region,
    grid: int = 9,
    tol: float = 1e-24,
    precision_bits: int = DEFAULT_PRECISION,
    newton_maxiter: int = 80,
) -> VerificationReport:
    """Newton from every grid node for f = a and f' = b; a region-local verdict."""
    stats = _NewtonStats()
    check_tol = tol ** 0.5
    witnesses: list[Witness] = []

    a_points = _grid_search(f, 0, prob.a, region, grid, tol, precision_bits, newton_maxiter, stats)
    holds_a = True
    for z in a_points:
        lhs = _float_jet(f, z, 1, precision_bits)[1]
        if not is_close(lhs, prob.a, check_tol):
            holds_a = False
            witnesses.append(Witness(z, "z", "a", lhs, prob.a, _defect(lhs, prob.a)))

    b_points = _grid_search(f, 1, prob.b, region, grid, tol, precision_bits, newton_maxiter, stats)
    holds_b = True
    for z in b_points:
        lhs = _float_jet(f, z, 0, precision_bits)[0]
        if not is_close(lhs, prob.b, check_tol):
            holds_b = False
            witnesses.append(Witness(z, "z", "b", lhs, prob.b, _defect(lhs, prob.b)))

    logger.info(
        "grid search: %d a-points, %d b-points, %d seeds without convergence",
        len(a_points),
        len(b_points),
        stats.failures,
    )
    warnings = ("region-local: absence of witnesses is evidence, not proof",)
    if prob.relaxed:
        warnings += ("relaxed mode: a = 0 or b = 0 permitted",)
    return VerificationReport(
        candidate=str(f),
        a=prob.a,
        b=prob.b,
        holds_a_implies=holds_a,
        holds_b_implies=holds_b,
        witnesses=tuple(witnesses),
        relaxed=prob.relaxed,
        region_local=True,
        warnings=warnings,
        newton_failures=stats.failures,
    )


# ---------- entry point ----------

DEFAULT_REGION = Region.square(-2, 2)


def verify(
    f: CandidateFunction,
    prob: SharingProblem,
    tol: float = 1e-24,
    precision_bits: int = DEFAULT_PRECISION,
    samples: int = 16,
    region: Region | None = None,
    grid: int = 9,
    root_maxiter: int = 500,
    newton_maxiter: int = 80,
) -> VerificationReport:
    """Full report for any candidate."""
    if isinstance(f, ExprFunction):
        report = grid_verify_expr(
            f, prob, region or DEFAULT_REGION, grid, tol, precision_bits, newton_maxiter
        )
        try:
            g, dev = check_g_constant(f, prob, samples, tol, precision_bits)
        except AllSamplesDegenerate as e:
            logger.warning("%s", e)
            return report
        return replace(report, g_constant_estimate=g, g_max_deviation=dev)

    warnings: list[str] = []
    counts = None
    if isinstance(f, AffineFunction):
        check_a, check_b = check_affine(f, prob, precision_bits)
    else:
        check_a = check_implication_a(f, prob, tol, precision_bits, root_maxiter)
        check_b = check_implication_b(f, prob, tol, precision_bits, root_maxiter)
        counts = counting(f, prob, tol, precision_bits, root_maxiter)
        warnings.extend(check_a.warnings + check_b.warnings)
    if prob.relaxed:
        warnings.append("relaxed mode: a = 0 or b = 0 permitted")

    g = dev = None
    try:
        g, dev = check_g_constant(f, prob, samples, tol, precision_bits)
    except AllSamplesDegenerate as e:
        logger.warning("%s", e)
        warnings.append(str(e))

    return VerificationReport(
        candidate=str(f),
        a=prob.a,
        b=prob.b,
        holds_a_implies=check_a.holds,
        holds_b_implies=check_b.holds,
        witnesses=check_a.witnesses + check_b.witnesses,
        g_constant_estimate=g,
        g_max_deviation=dev,
        counts=counts,
        relaxed=prob.relaxed,
        warnings=tuple(warnings),
    )
