# taylor.py
"""
Truncated power series and jets.

`TaylorSeries` holds Taylor coefficients c_0..c_N of a function around an
anchor (c_n = f^(n)(z0) / n!). Arithmetic truncates at the shorter order, which
is what holomorphic automatic differentiation through an expression tree needs.

`Jet` is the user-facing value: plain derivatives f(z0), f'(z0), ..., f^(N)(z0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from errors import InvalidParameters, MixedRegime
from scalars import (
    DEFAULT_PRECISION,
    FieldElement,
    FloatScalar,
    Regime,
    as_scalar,
    exp_scalar,
    is_close,
    parse_scalar,
)


@dataclass(frozen=True)
class TaylorSeries:
    coeffs: tuple

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise InvalidParameters("a series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(as_scalar(c) for c in self.coeffs))

    @classmethod
    def constant(cls, c, order: int) -> "TaylorSeries":
        c = as_scalar(c)
        return cls((c,) + (c * 0,) * order)

    @classmethod
    def variable(cls, z0, order: int) -> "TaylorSeries":
        """The identity function z around z0."""
        z0 = as_scalar(z0)
        if order == 0:
            return cls((z0,))
        return cls((z0, z0 * 0 + 1) + (z0 * 0,) * (order - 1))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_float(self) -> bool:
        return any(isinstance(c, FloatScalar) for c in self.coeffs)

    def to_float(self, precision_bits: int = DEFAULT_PRECISION) -> "TaylorSeries":
        return TaylorSeries(tuple(c.to_float(precision_bits) for c in self.coeffs))

    def _align(self, other: "TaylorSeries") -> tuple["TaylorSeries", "TaylorSeries", int]:
        """Common truncation order; an exact operand meeting a float one is demoted."""
        n = min(self.order, other.order)
        left, right = self, other
        if left.is_float and not right.is_float:
            right = right.to_float(_precision_of(left))
        elif right.is_float and not left.is_float:
            left = left.to_float(_precision_of(right))
        return left, right, n

    def __add__(self, other):
        if not isinstance(other, TaylorSeries):
            other = TaylorSeries.constant(other, self.order)
        left, other, n = self._align(other)
        return TaylorSeries(tuple(left.coeffs[i] + other.coeffs[i] for i in range(n + 1)))

    __radd__ = __add__

    def __neg__(self) -> "TaylorSeries":
        return TaylorSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TaylorSeries):
            other = TaylorSeries.constant(other, self.order)
        left, other, n = self._align(other)
        out = []
        for k in range(n + 1):
            acc = left.coeffs[0] * other.coeffs[k]
            for i in range(1, k + 1):
                acc = acc + left.coeffs[i] * other.coeffs[k - i]
            out.append(acc)
        return TaylorSeries(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TaylorSeries):
            raise InvalidParameters("series division is only by constants")
        return self * (1 / as_scalar(other))

    def __pow__(self, exponent: int) -> "TaylorSeries":
        if exponent < 0:
            raise InvalidParameters("negative powers are not entire")
        result = TaylorSeries.constant(self.coeffs[0] * 0 + 1, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def exp(self, precision_bits: int = DEFAULT_PRECISION) -> "TaylorSeries":
        """exp of a series: g_0 = e^(f_0), g_n = (1/n) sum_{k=1..n} k f_k g_(n-k)."""
        g0 = exp_scalar(self.coeffs[0], precision_bits)
        f = self.to_float(precision_bits) if isinstance(g0, FloatScalar) and not self.is_float else self
        g = [g0]
        for n in range(1, f.order + 1):
            acc = g0 * 0
            for k in range(1, n + 1):
                acc = acc + k * f.coeffs[k] * g[n - k]
            g.append(acc / n)
        return TaylorSeries(tuple(g))

    def derivatives(self) -> tuple:
        """f^(n)(z0) = n! c_n."""
        return tuple(math.factorial(n) * c for n, c in enumerate(self.coeffs))

    @classmethod
    def from_derivatives(cls, derivs: Sequence) -> "TaylorSeries":
        return cls(tuple(as_scalar(d) / math.factorial(n) for n, d in enumerate(derivs)))


@dataclass(frozen=True)
class Jet:
    """Derivatives (f(z0), f'(z0), ..., f^(N)(z0)), not divided by factorials."""

    anchor: FieldElement
    derivs: tuple
    anchor_t: FieldElement | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.derivs:
            raise InvalidParameters("a jet needs at least f(z0)")
        object.__setattr__(self, "anchor", as_scalar(self.anchor))
        object.__setattr__(self, "derivs", tuple(as_scalar(d) for d in self.derivs))

    @property
    def order(self) -> int:
        return len(self.derivs) - 1

    def taylor_coefficients(self) -> tuple:
        return TaylorSeries.from_derivatives(self.derivs).coeffs

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise InvalidParameters(f"cannot truncate an order-{self.order} jet to order {order}")
        return Jet(self.anchor, self.derivs[: order + 1], self.anchor_t)

    def first_mismatch(self, other: "Jet", tol: float) -> int | None:
        """Smallest n where the two jets disagree, comparing the common orders."""
        for n in range(min(self.order, other.order) + 1):
            x, y = self.derivs[n], other.derivs[n]
            try:
                same = is_close(x, y, tol)
            except MixedRegime:
                same = is_close(x.to_float(), y.to_float(), tol)
            if not same:
                return n
        return None

    @property
    def regime(self) -> Regime:
        return Regime.FLOAT if any(isinstance(d, FloatScalar) for d in self.derivs) else Regime.EXACT

    def to_dict(self) -> dict:
        out = {
            "anchor": self.anchor.serialize(),
            "order": self.order,
            "derivs": [d.serialize() for d in self.derivs],
        }
        if self.anchor_t is not None:
            out["anchor_t"] = self.anchor_t.serialize()
        return out

    @staticmethod
    def from_dict(d: dict) -> "Jet":
        anchor_t = d.get("anchor_t")
        return Jet(
            anchor=parse_scalar(d["anchor"]),
            derivs=tuple(parse_scalar(s) for s in d["derivs"]),
            anchor_t=parse_scalar(anchor_t) if anchor_t is not None else None,
        )


def exact_fraction(x) -> Fraction:
    """Real rational value of an exact scalar."""
    s = as_scalar(x)
    if isinstance(s, FloatScalar) or not s.is_real:
        raise InvalidParameters(f"expected a real rational, got {s}")
    return s.re


def _precision_of(series: TaylorSeries) -> int:
    return min(c.precision_bits for c in series.coeffs if isinstance(c, FloatScalar))
