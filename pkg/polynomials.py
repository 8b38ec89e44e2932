# polynomials.py
"""
Polynomials in t with complex coefficients, and certified root finding.

Coefficients are stored lowest power first and trimmed, so the leading
coefficient is never an exact zero. All coefficients of one polynomial share a
scalar regime.

Root finding:
- exact regime: the power of t is split off exactly, the rest goes through a
  square-free decomposition (derivative GCD, Yun's algorithm) which fixes the
  multiplicities; roots of each square-free factor are located with Aberth's
  iteration and snapped back to exact values whenever an exact check confirms
  them.
- float regime: Aberth's iteration on the whole polynomial, multiplicities by
  clustering, every root certified by its relative residual.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from errors import InvalidParameters, LeadingZero, MixedRegime, NoConvergence
from scalars import (
    DEFAULT_PRECISION,
    EisensteinRational,
    FieldElement,
    FloatScalar,
    GaussianRational,
    Regime,
    ZERO,
    as_scalar,
)

logger = logging.getLogger(__name__)

MINUS_INFINITY = float("-inf")

GUARD_BITS = 24
SNAP_MAX_DENOMINATOR = 10**9


def _is_exact_zero(c: FieldElement) -> bool:
    if isinstance(c, FloatScalar):
        return c.value == 0
    return not c


@dataclass(frozen=True)
class Poly:
    coeffs: tuple = ()

    def __post_init__(self) -> None:
        cs = [as_scalar(c) for c in self.coeffs]
        while cs and _is_exact_zero(cs[-1]):
            cs.pop()
        regimes = {c.regime for c in cs}
        if len(regimes) > 1:
            left, right = sorted(r.value for r in regimes)[:2]
            raise MixedRegime(left, right)
        object.__setattr__(self, "coeffs", tuple(cs))

    # ----- constructors -----

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, c, power: int) -> "Poly":
        zero = ZERO if not isinstance(as_scalar(c), (FloatScalar, EisensteinRational)) else as_scalar(c) * 0
        return cls((zero,) * power + (c,))

    @classmethod
    def t(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable, leading=1) -> "Poly":
        result = cls.constant(leading)
        for r in roots:
            result = result * cls((-as_scalar(r), 1))
        return result

    # ----- properties -----

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INFINITY

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> FieldElement:
        if not self.coeffs:
            raise LeadingZero("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def regime(self) -> Regime | None:
        return self.coeffs[0].regime if self.coeffs else None

    def coeff(self, n: int) -> FieldElement:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return self._zero()

    def _zero(self) -> FieldElement:
        return self.coeffs[0] * 0 if self.coeffs else ZERO

    def valuation(self) -> int | float:
        """Multiplicity of the root t = 0 (exact zeros only)."""
        for n, c in enumerate(self.coeffs):
            if not _is_exact_zero(c):
                return n
        return math.inf

    # ----- arithmetic -----

    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return poly_add(self, -other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return poly_add(other, -self)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return poly_mul(self, other)
        if isinstance(other, (int, Fraction, GaussianRational, FloatScalar, EisensteinRational)):
            return Poly(tuple(c * other for c in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        result = Poly.constant(self.coeffs[0] * 0 + 1 if self.coeffs else 1)
        for _ in range(exponent):
            result = result * self
        return result

    def __call__(self, x) -> FieldElement:
        return poly_eval(self, x)

    def derive(self) -> "Poly":
        return poly_derive(self)

    def monic(self) -> "Poly":
        lc = self.leading
        return Poly(tuple(c / lc for c in self.coeffs))

    def to_float(self, precision_bits: int = DEFAULT_PRECISION) -> "Poly":
        return Poly(tuple(c.to_float(precision_bits) for c in self.coeffs))

    # ----- text -----

    def serialize(self) -> list[str]:
        return [c.serialize() for c in self.coeffs]

    @classmethod
    def from_serialized(cls, items: Sequence[str]) -> "Poly":
        return cls(tuple(as_scalar(s) for s in items))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for n in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[n]
            if _is_exact_zero(c):
                continue
            text = str(c)
            if any(ch in text[1:] for ch in "+-") or "i" in text or "w" in text:
                text = f"({text})"
            power = "" if n == 0 else ("t" if n == 1 else f"t^{n}")
            if power and text == "1":
                text = ""
            elif power and text == "-1":
                text = "-"
            terms.append(f"{text}{power}")
        out = " + ".join(terms)
        return out.replace("+ -", "- ")


def _as_poly(x) -> Poly | None:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction, GaussianRational, FloatScalar, EisensteinRational)):
        return Poly.constant(x)
    return None


# ---------- ring operations ----------


def _check_regimes(p: Poly, q: Poly) -> None:
    if p.regime is not None and q.regime is not None and p.regime != q.regime:
        raise MixedRegime(p.regime.value, q.regime.value)


def poly_add(p: Poly, q: Poly) -> Poly:
    _check_regimes(p, q)
    n = max(len(p.coeffs), len(q.coeffs))
    out = []
    for i in range(n):
        if i >= len(p.coeffs):
            out.append(q.coeffs[i])
        elif i >= len(q.coeffs):
            out.append(p.coeffs[i])
        else:
            out.append(p.coeffs[i] + q.coeffs[i])
    return Poly(tuple(out))


def poly_mul(p: Poly, q: Poly) -> Poly:
    _check_regimes(p, q)
    if p.is_zero or q.is_zero:
        return Poly()
    out = [p.coeffs[0] * 0] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        for j, b in enumerate(q.coeffs):
            out[i + j] = out[i + j] + a * b
    return Poly(tuple(out))


def poly_derive(p: Poly) -> Poly:
    """d/dt."""
    return Poly(tuple(n * c for n, c in enumerate(p.coeffs) if n > 0))


def poly_eval(p: Poly, x) -> FieldElement:
    """Horner evaluation."""
    x = as_scalar(x)
    if p.is_zero:
        return x * 0
    acc = p.coeffs[-1]
    for c in reversed(p.coeffs[:-1]):
        acc = acc * x + c
    return acc


def poly_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Euclidean division; exact in the exact regimes."""
    if q.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    _check_regimes(p, q)
    rem = list(p.coeffs)
    dq = len(q.coeffs) - 1
    lc = q.leading
    if len(rem) - 1 < dq:
        return Poly(), p
    quot = [lc * 0] * (len(rem) - dq)
    for shift in range(len(rem) - 1 - dq, -1, -1):
        c = rem[shift + dq] / lc
        quot[shift] = c
        for i, qc in enumerate(q.coeffs):
            rem[shift + i] = rem[shift + i] - c * qc
    return Poly(tuple(quot)), Poly(tuple(rem[:dq]))


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic GCD by Euclid's algorithm (exact regimes only)."""
    for x in (p, q):
        if x.regime is Regime.FLOAT:
            raise MixedRegime(Regime.FLOAT.value, Regime.EXACT.value)
    a, b = p, q
    while not b.is_zero:
        a, b = b, poly_divmod(a, b)[1]
    if a.is_zero:
        return a
    return a.monic()


def square_free_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """
    Yun's algorithm: p = lc * prod(a_i ** i) with square-free, pairwise coprime
    monic a_i. Returns the non-constant (a_i, i).
    """
    if p.degree < 1:
        return []
    dp = poly_derive(p)
    a0 = poly_gcd(p, dp)
    b = poly_divmod(p, a0)[0]
    c = poly_divmod(dp, a0)[0]
    d = c - poly_derive(b)
    out: list[tuple[Poly, int]] = []
    i = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        if a.degree >= 1:
            out.append((a, i))
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = c - poly_derive(b)
        i += 1
    return out


def discriminant_quadratic(alpha, beta, gamma) -> FieldElement:
    """beta^2 - 4 alpha gamma of alpha t^2 + beta t + gamma."""
    alpha, beta, gamma = as_scalar(alpha), as_scalar(beta), as_scalar(gamma)
    if _is_exact_zero(alpha):
        raise LeadingZero("quadratic with zero leading coefficient")
    return beta * beta - 4 * alpha * gamma


# ---------- roots ----------


@dataclass(frozen=True)
class Root:
    location: FieldElement
    multiplicity: int
    residual: object = Fraction(0)

    @property
    def is_exact(self) -> bool:
        return not isinstance(self.location, FloatScalar)

    def to_dict(self) -> dict:
        return {
            "location": self.location.serialize(),
            "multiplicity": self.multiplicity,
            "residual": str(self.residual),
        }


@dataclass(frozen=True)
class RootSet:
    roots: tuple[Root, ...]
    tol: float

    @property
    def degree(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    def nonzero(self, tol: float | None = None) -> list[Root]:
        """Roots away from t = 0; exact roots compare exactly."""
        out = []
        for r in self.roots:
            if r.is_exact:
                if r.location:
                    out.append(r)
            elif r.location.magnitude() > (self.tol if tol is None else tol):
                out.append(r)
        return out

    def multiplicity_at_zero(self) -> int:
        return sum(r.multiplicity for r in self.roots if r.is_exact and not r.location)

    def to_dict(self) -> dict:
        return {"tol": self.tol, "roots": [r.to_dict() for r in self.roots]}


def _mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    man, exp = x.man_exp
    return Fraction(int(man)) * (Fraction(2) ** int(exp))


def _relative_residual(coeffs: Sequence[mpmath.mpc], z: mpmath.mpc) -> mpmath.mpf:
    value = mpmath.mpc(0)
    scale = mpmath.mpf(0)
    az = mpmath.fabs(z)
    for c in reversed(coeffs):
        value = value * z + c
        scale = scale * az + mpmath.fabs(c)
    if scale == 0:
        return mpmath.mpf(0)
    return mpmath.fabs(value) / scale


def _aberth(coeffs: Sequence[mpmath.mpc], tol: float, maxiter: int) -> tuple[list[mpmath.mpc], int]:
    """Simultaneous Aberth-Ehrlich iteration; caller holds the working precision."""
    n = len(coeffs) - 1
    lead = coeffs[-1]
    if n == 1:
        return [-coeffs[0] / lead], 0
    dcoeffs = [k * coeffs[k] for k in range(1, n + 1)]

    c0 = coeffs[0]
    radius = mpmath.root(mpmath.fabs(c0 / lead), n) if c0 != 0 else mpmath.mpf(1)
    if radius == 0:
        radius = mpmath.mpf(1)
    zs = [radius * mpmath.expj(2 * mpmath.pi * k / n + mpmath.mpf("0.4")) for k in range(n)]

    eps = mpmath.mpf(2) ** (-(mpmath.mp.prec - 8))
    for iteration in range(1, maxiter + 1):
        biggest_step = mpmath.mpf(0)
        for i in range(n):
            z = zs[i]
            p = mpmath.mpc(0)
            for c in reversed(coeffs):
                p = p * z + c
            if p == 0:
                continue
            dp = mpmath.mpc(0)
            for c in reversed(dcoeffs):
                dp = dp * z + c
            s = mpmath.mpc(0)
            for j in range(n):
                if j != i:
                    diff = z - zs[j]
                    if diff != 0:
                        s += 1 / diff
            ratio = p / dp if dp != 0 else p
            step = ratio / (1 - ratio * s)
            zs[i] = z - step
            rel = mpmath.fabs(step) / max(mpmath.mpf(1), mpmath.fabs(zs[i]))
            biggest_step = max(biggest_step, rel)
        if biggest_step <= eps:
            return zs, iteration
        if all(_relative_residual(coeffs, z) <= tol * eps for z in zs):
            return zs, iteration
    return zs, maxiter


def _float_roots(
    coeffs: Sequence[mpmath.mpc], tol: float, precision_bits: int, maxiter: int
) -> list[tuple[mpmath.mpc, int, mpmath.mpf]]:
    """(location, multiplicity, relative residual) for a float polynomial."""
    n = len(coeffs) - 1
    with mpmath.workprec(precision_bits + GUARD_BITS):
        zs, iterations = _aberth(coeffs, tol, maxiter)
        logger.debug("aberth: degree %d in %d iterations", n, iterations)

        # clustering: a root of multiplicity m is resolved only to ~ tol**(1/m)
        radius_base = mpmath.mpf(10) * mpmath.mpf(tol) ** (mpmath.mpf(1) / n)
        parent = list(range(n))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                scale = max(mpmath.mpf(1), mpmath.fabs(zs[i]), mpmath.fabs(zs[j]))
                if mpmath.fabs(zs[i] - zs[j]) <= radius_base * scale:
                    parent[find(i)] = find(j)
        clusters: dict[int, list[mpmath.mpc]] = {}
        for i in range(n):
            clusters.setdefault(find(i), []).append(zs[i])

        out = []
        worst = mpmath.mpf(0)
        for members in clusters.values():
            center = sum(members, mpmath.mpc(0)) / len(members)
            residual = _relative_residual(coeffs, center)
            worst = max(worst, residual)
            out.append((center, len(members), residual))
        if worst > tol:
            raise NoConvergence(n, iterations, mpmath.nstr(worst, 5))
    return out


def _snap_gaussian(z: mpmath.mpc) -> GaussianRational:
    re = _mpf_to_fraction(mpmath.mpf(z.real)).limit_denominator(SNAP_MAX_DENOMINATOR)
    im = _mpf_to_fraction(mpmath.mpf(z.imag)).limit_denominator(SNAP_MAX_DENOMINATOR)
    return GaussianRational(re, im)


def _snap_eisenstein(z: mpmath.mpc) -> EisensteinRational:
    # z = x + y w with w = 1/2 + i sqrt(3)/2
    y = z.imag * 2 / mpmath.sqrt(3)
    x = z.real - y / 2
    return EisensteinRational(
        _mpf_to_fraction(mpmath.mpf(x)).limit_denominator(SNAP_MAX_DENOMINATOR),
        _mpf_to_fraction(mpmath.mpf(y)).limit_denominator(SNAP_MAX_DENOMINATOR),
    )


def _exact_factor_roots(
    factor: Poly, multiplicity: int, tol: float, precision_bits: int, maxiter: int
) -> list[Root]:
    """Roots of a square-free exact factor, as exact values wherever possible."""
    roots: list[Root] = []
    remaining = factor
    while remaining.degree >= 1:
        if remaining.degree == 1:
            roots.append(Root(-remaining.coeffs[0] / remaining.coeffs[1], multiplicity))
            return roots
        if remaining.degree == 2 and remaining.regime is Regime.EXACT:
            c, b, a = remaining.coeffs
            disc_root = discriminant_quadratic(a, b, c).sqrt()
            if disc_root is not None:
                for sign in (1, -1):
                    roots.append(Root((-b + sign * disc_root) / (2 * a), multiplicity))
                return roots
        numeric = remaining.to_float(precision_bits).coeffs
        located = _float_roots([c.value for c in numeric], tol, precision_bits, maxiter)
        snapped = None
        with mpmath.workprec(precision_bits + GUARD_BITS):
            for z, _, _ in located:
                candidate = _snap_eisenstein(z) if remaining.regime is Regime.EXACT_EISENSTEIN else _snap_gaussian(z)
                if not poly_eval(remaining, candidate):
                    snapped = candidate
                    break
        if snapped is None:
            for z, _, residual in located:
                roots.append(Root(FloatScalar(z, precision_bits), multiplicity, residual))
            return roots
        roots.append(Root(snapped, multiplicity))
        remaining = poly_divmod(remaining, Poly((-snapped, 1)))[0]
    return roots


def poly_roots(
    p: Poly,
    tol: float = 1e-24,
    precision_bits: int = DEFAULT_PRECISION,
    maxiter: int = 500,
) -> RootSet:
    """All complex roots of p with multiplicities."""
    if p.degree < 1:
        raise InvalidParameters("poly_roots needs a polynomial of degree >= 1")
    if not tol > 0:
        raise InvalidParameters("tol must be positive")

    v = int(p.valuation())
    roots: list[Root] = []
    if v:
        zero = p.leading * 0
        roots.append(Root(zero, v))
    rest = Poly(p.coeffs[v:])

    if rest.degree >= 1:
        if rest.regime is Regime.FLOAT:
            for z, m, residual in _float_roots([c.value for c in rest.coeffs], tol, precision_bits, maxiter):
                roots.append(Root(FloatScalar(z, precision_bits), m, residual))
        else:
            for factor, m in square_free_decomposition(rest):
                roots.extend(_exact_factor_roots(factor, m, tol, precision_bits, maxiter))

    result = RootSet(tuple(roots), tol)
    if result.degree != p.degree:
        raise NoConvergence(int(p.degree), maxiter, "root count mismatch")
    return result
