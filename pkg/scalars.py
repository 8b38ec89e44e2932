# scalars.py
"""
Complex scalars in two regimes.

- `GaussianRational`: exact x + iy with rational x, y. Closed under
  + - * / with no rounding; equality is decidable.
- `FloatScalar`: an mpmath complex value carrying its precision in bits.
  Operations run at the minimum precision of their operands. Values are
  compared only through `is_close`.

A third, auxiliary exact type `EisensteinRational` represents x + y*w with
w^2 = w - 1 (w a primitive sixth root of unity). It is used where e^(i*pi/3)
must stay exact.

Exact and float scalars never mix implicitly: combining them raises
`MixedRegime`. Python ints and Fractions combine with everything.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

import mpmath

from errors import InvalidParameters, MixedRegime

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 128

Rational = Union[int, Fraction]


class Regime(str, Enum):
    EXACT = "exact"
    EXACT_EISENSTEIN = "exact-eisenstein"
    FLOAT = "float"


def _fraction(x: Rational | str) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _fraction_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _fraction_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _mpf_from_fraction(q: Fraction) -> mpmath.mpf:
    # callers hold the working precision
    return mpmath.mpf(q.numerator) / q.denominator


def _digits_for(precision_bits: int) -> int:
    return int(precision_bits * math.log10(2)) + 3


# ---------- Exact regime ----------


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _fraction(self.re))
        object.__setattr__(self, "im", _fraction(self.im))

    regime = Regime.EXACT

    @classmethod
    def coerce(cls, other: object) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return cls(Fraction(other))
        if isinstance(other, (FloatScalar, EisensteinRational)):
            raise MixedRegime(Regime.EXACT.value, other.regime.value)
        raise TypeError(f"cannot use {type(other).__name__} as an exact scalar")

    def _other(self, other: object) -> "GaussianRational | None":
        if isinstance(other, (GaussianRational, int, Fraction, FloatScalar, EisensteinRational)):
            if isinstance(other, EisensteinRational) and self.im == 0:
                return None
            return GaussianRational.coerce(other)
        return None

    # ----- arithmetic -----

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __pos__(self) -> "GaussianRational":
        return self

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int) -> "GaussianRational":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = GaussianRational(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        return GaussianRational(self.re / n, -self.im / n)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """|x|^2, exact."""
        return self.re * self.re + self.im * self.im

    # ----- predicates -----

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_zero(self, tol: float | None = None) -> bool:
        return not self

    @property
    def is_real(self) -> bool:
        return self.im == 0

    # ----- roots and conversions -----

    def sqrt(self) -> "GaussianRational | None":
        """Principal square root if it is again Gaussian-rational, else None."""
        if not self:
            return self
        modulus = _fraction_sqrt(self.norm())
        if modulus is None:
            return None
        p = _fraction_sqrt((modulus + self.re) / 2)
        if p is None:
            return None
        if p != 0:
            q = self.im / (2 * p)
        else:
            q = _fraction_sqrt((modulus - self.re) / 2)
            if q is None:
                return None
        root = GaussianRational(p, q)
        # principal branch: Re > 0, or Re == 0 and Im >= 0
        if root.re < 0 or (root.re == 0 and root.im < 0):
            root = -root
        return root

    def to_float(self, precision_bits: int = DEFAULT_PRECISION) -> "FloatScalar":
        with mpmath.workprec(precision_bits):
            value = mpmath.mpc(_mpf_from_fraction(self.re), _mpf_from_fraction(self.im))
        return FloatScalar(value, precision_bits)

    def magnitude(self, precision_bits: int = DEFAULT_PRECISION) -> mpmath.mpf:
        exact = _fraction_sqrt(self.norm())
        with mpmath.workprec(precision_bits):
            if exact is not None:
                return _mpf_from_fraction(exact)
            return mpmath.sqrt(_mpf_from_fraction(self.norm()))

    def serialize(self) -> str:
        sign = "-" if self.im < 0 else "+"
        return (
            f"{self.re.numerator}/{self.re.denominator}"
            f"{sign}{abs(self.im.numerator)}/{self.im.denominator}*i"
        )

    def __str__(self) -> str:
        if self.im == 0:
            return _fraction_text(self.re)
        if self.im == 1:
            im_text = "i"
        elif self.im == -1:
            im_text = "-i"
        else:
            im_text = f"{_fraction_text(self.im)}i"
        if self.re == 0:
            return im_text
        sign = "" if im_text.startswith("-") else "+"
        return f"{_fraction_text(self.re)}{sign}{im_text}"

    def __repr__(self) -> str:
        return f"GaussianRational({self})"


# ---------- Float regime ----------


@dataclass(frozen=True, eq=False)
class FloatScalar:
    value: mpmath.mpc
    precision_bits: int = DEFAULT_PRECISION

    def __post_init__(self) -> None:
        if self.precision_bits < 2:
            raise InvalidParameters("precision_bits must be positive")
        if not isinstance(self.value, mpmath.mpc):
            with mpmath.workprec(self.precision_bits):
                object.__setattr__(self, "value", mpmath.mpc(self.value))

    regime = Regime.FLOAT

    @classmethod
    def from_parts(cls, re_part, im_part=0, precision_bits: int = DEFAULT_PRECISION) -> "FloatScalar":
        with mpmath.workprec(precision_bits):
            return cls(mpmath.mpc(re_part, im_part), precision_bits)

    def _pair(self, other: object) -> tuple[mpmath.mpc, int] | None:
        if isinstance(other, FloatScalar):
            return other.value, min(self.precision_bits, other.precision_bits)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            with mpmath.workprec(self.precision_bits):
                q = _fraction(other)
                return mpmath.mpc(_mpf_from_fraction(q)), self.precision_bits
        if isinstance(other, (GaussianRational, EisensteinRational)):
            raise MixedRegime(Regime.FLOAT.value, other.regime.value)
        return None

    def _apply(self, other: object, op, reflected: bool = False):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        value, prec = pair
        with mpmath.workprec(prec):
            result = op(value, self.value) if reflected else op(self.value, value)
        return FloatScalar(result, prec)

    def __add__(self, other):
        return self._apply(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._apply(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._apply(other, lambda x, y: x - y, reflected=True)

    def __mul__(self, other):
        return self._apply(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._apply(other, lambda x, y: x / y)

    def __rtruediv__(self, other):
        return self._apply(other, lambda x, y: x / y, reflected=True)

    def __neg__(self) -> "FloatScalar":
        with mpmath.workprec(self.precision_bits):
            return FloatScalar(-self.value, self.precision_bits)

    def __pos__(self) -> "FloatScalar":
        return self

    def __pow__(self, exponent: int) -> "FloatScalar":
        if not isinstance(exponent, int):
            return NotImplemented
        with mpmath.workprec(self.precision_bits):
            return FloatScalar(self.value**exponent, self.precision_bits)

    def __bool__(self) -> bool:
        return bool(self.value)

    def is_zero(self, tol: float | None = None) -> bool:
        if tol is None:
            return self.value == 0
        with mpmath.workprec(self.precision_bits):
            return mpmath.fabs(self.value) <= tol

    def conjugate(self) -> "FloatScalar":
        with mpmath.workprec(self.precision_bits):
            return FloatScalar(mpmath.conj(self.value), self.precision_bits)

    def sqrt(self) -> "FloatScalar":
        with mpmath.workprec(self.precision_bits):
            return FloatScalar(mpmath.sqrt(self.value), self.precision_bits)

    def magnitude(self, precision_bits: int | None = None) -> mpmath.mpf:
        with mpmath.workprec(precision_bits or self.precision_bits):
            return mpmath.fabs(self.value)

    def to_float(self, precision_bits: int | None = None) -> "FloatScalar":
        if precision_bits is None or precision_bits == self.precision_bits:
            return self
        with mpmath.workprec(precision_bits):
            return FloatScalar(+self.value, precision_bits)

    def serialize(self) -> str:
        digits = _digits_for(self.precision_bits)
        with mpmath.workprec(self.precision_bits):
            re_text = mpmath.nstr(self.value.real, digits)
            im_text = mpmath.nstr(self.value.imag, digits)
        if not im_text.startswith("-"):
            im_text = "+" + im_text
        return f"{re_text}{im_text}*i@{self.precision_bits}"

    def __str__(self) -> str:
        with mpmath.workprec(self.precision_bits):
            return mpmath.nstr(self.value, 15)

    def __repr__(self) -> str:
        return f"FloatScalar({self}, precision_bits={self.precision_bits})"


# ---------- Q(w), w^2 = w - 1 ----------


@dataclass(frozen=True)
class EisensteinRational:
    """x + y*w with rational x, y and w^2 = w - 1."""

    x: Fraction
    y: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _fraction(self.x))
        object.__setattr__(self, "y", _fraction(self.y))

    regime = Regime.EXACT_EISENSTEIN

    @classmethod
    def generator(cls) -> "EisensteinRational":
        return cls(0, 1)

    @classmethod
    def coerce(cls, other: object) -> "EisensteinRational":
        if isinstance(other, EisensteinRational):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return cls(Fraction(other))
        if isinstance(other, GaussianRational) and other.im == 0:
            return cls(other.re)
        if isinstance(other, (GaussianRational, FloatScalar)):
            raise MixedRegime(Regime.EXACT_EISENSTEIN.value, other.regime.value)
        raise TypeError(f"cannot use {type(other).__name__} in Q(w)")

    def _other(self, other: object) -> "EisensteinRational | None":
        if isinstance(other, (EisensteinRational, int, Fraction, GaussianRational, FloatScalar)):
            return EisensteinRational.coerce(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return EisensteinRational(self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self) -> "EisensteinRational":
        return EisensteinRational(-self.x, -self.y)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return EisensteinRational(self.x - o.x, self.y - o.y)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        # (x1 + y1 w)(x2 + y2 w) with w^2 = w - 1
        return EisensteinRational(
            self.x * o.x - self.y * o.y,
            self.x * o.y + self.y * o.x + self.y * o.y,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int) -> "EisensteinRational":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = EisensteinRational(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> "EisensteinRational":
        # conj(w) = 1 - w
        return EisensteinRational(self.x + self.y, -self.y)

    def norm(self) -> Fraction:
        return self.x * self.x + self.x * self.y + self.y * self.y

    def inverse(self) -> "EisensteinRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by exact zero in Q(w)")
        c = self.conjugate()
        return EisensteinRational(c.x / n, c.y / n)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, EisensteinRational):
            return self.x == other.x and self.y == other.y
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.x) if self.y == 0 else hash((self.x, self.y))

    def __bool__(self) -> bool:
        return bool(self.x) or bool(self.y)

    def is_zero(self, tol: float | None = None) -> bool:
        return not self

    def to_float(self, precision_bits: int = DEFAULT_PRECISION, conjugate_root: bool = False) -> FloatScalar:
        """Embed with w = e^(i*pi/3), or e^(-i*pi/3) when `conjugate_root`."""
        with mpmath.workprec(precision_bits):
            w = mpmath.expjpi(mpmath.mpf(-1 if conjugate_root else 1) / 3)
            value = _mpf_from_fraction(self.x) + _mpf_from_fraction(self.y) * w
        return FloatScalar(value, precision_bits)

    def magnitude(self, precision_bits: int = DEFAULT_PRECISION) -> mpmath.mpf:
        with mpmath.workprec(precision_bits):
            return mpmath.sqrt(_mpf_from_fraction(self.norm()))

    def serialize(self) -> str:
        sign = "-" if self.y < 0 else "+"
        return (
            f"{self.x.numerator}/{self.x.denominator}"
            f"{sign}{abs(self.y.numerator)}/{self.y.denominator}*w"
        )

    def __str__(self) -> str:
        if self.y == 0:
            return _fraction_text(self.x)
        y_text = {1: "w", -1: "-w"}.get(self.y, f"{_fraction_text(self.y)}w")
        if self.x == 0:
            return y_text
        sign = "" if y_text.startswith("-") else "+"
        return f"{_fraction_text(self.x)}{sign}{y_text}"

    def __repr__(self) -> str:
        return f"EisensteinRational({self})"


Scalar = Union[GaussianRational, FloatScalar]
FieldElement = Union[GaussianRational, FloatScalar, EisensteinRational]

ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


# ---------- helpers ----------


def as_scalar(x: object) -> FieldElement:
    """Lift ints and Fractions into the exact regime; pass scalars through."""
    if isinstance(x, (GaussianRational, FloatScalar, EisensteinRational)):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return GaussianRational(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"not a scalar: {x!r}")


def regime_of(x: object) -> Regime:
    return as_scalar(x).regime


def to_float(x: object, precision_bits: int = DEFAULT_PRECISION) -> FloatScalar:
    return as_scalar(x).to_float(precision_bits)


def magnitude(x: object, precision_bits: int = DEFAULT_PRECISION) -> mpmath.mpf:
    return as_scalar(x).magnitude(precision_bits)


def is_close(x: object, y: object, tol: float) -> bool:
    """Exact equality for exact operands, else |x-y| <= tol * max(1, |x|, |y|)."""
    sx, sy = as_scalar(x), as_scalar(y)
    if sx.regime == sy.regime and sx.regime is not Regime.FLOAT:
        return sx == sy
    prec = min(
        s.precision_bits if isinstance(s, FloatScalar) else DEFAULT_PRECISION for s in (sx, sy)
    )
    fx, fy = sx.to_float(prec), sy.to_float(prec)
    with mpmath.workprec(prec):
        scale = max(mpmath.mpf(1), mpmath.fabs(fx.value), mpmath.fabs(fy.value))
        return mpmath.fabs(fx.value - fy.value) <= tol * scale


def common_regime(*values: object) -> Regime:
    """The single regime of `values`; raises MixedRegime if they disagree."""
    regimes = {as_scalar(v).regime for v in values}
    if not regimes:
        return Regime.EXACT
    if len(regimes) > 1:
        left, right = sorted(r.value for r in regimes)[:2]
        raise MixedRegime(left, right)
    return regimes.pop()


def promote(x: object, y: object) -> tuple[FieldElement, FieldElement]:
    """Bring two scalars to one regime, demoting the exact side to float if needed."""
    sx, sy = as_scalar(x), as_scalar(y)
    if isinstance(sx, FloatScalar) and not isinstance(sy, FloatScalar):
        return sx, sy.to_float(sx.precision_bits)
    if isinstance(sy, FloatScalar) and not isinstance(sx, FloatScalar):
        return sx.to_float(sy.precision_bits), sy
    return sx, sy


def exp_scalar(x: object, precision_bits: int = DEFAULT_PRECISION) -> Scalar:
    """e^x; stays exact only for x == 0."""
    s = as_scalar(x)
    if not isinstance(s, FloatScalar) and not s:
        return ONE
    f = s.to_float(precision_bits) if not isinstance(s, FloatScalar) else s
    with mpmath.workprec(f.precision_bits):
        return FloatScalar(mpmath.exp(f.value), f.precision_bits)


def log_scalar(x: object, precision_bits: int = DEFAULT_PRECISION) -> FloatScalar:
    """Principal logarithm, always float."""
    f = to_float(x, precision_bits) if not isinstance(x, FloatScalar) else x
    with mpmath.workprec(f.precision_bits):
        return FloatScalar(mpmath.log(f.value), f.precision_bits)


def sqrt_scalar(x: object, precision_bits: int = DEFAULT_PRECISION) -> tuple[Scalar, bool]:
    """Principal square root and whether the result had to be demoted to float."""
    s = as_scalar(x)
    if isinstance(s, GaussianRational):
        root = s.sqrt()
        if root is not None:
            return root, False
        logger.warning("sqrt(%s) is not Gaussian-rational; demoting to %d-bit float", s, precision_bits)
        return s.to_float(precision_bits).sqrt(), True
    if isinstance(s, FloatScalar):
        return s.sqrt(), False
    raise MixedRegime(s.regime.value, Regime.EXACT.value)


# ---------- parsing ----------

_EXACT_RE = re.compile(r"^\s*(-?\d+)/(\d+)([+-])(\d+)/(\d+)\*i\s*$")
_EISENSTEIN_RE = re.compile(r"^\s*(-?\d+)/(\d+)([+-])(\d+)/(\d+)\*w\s*$")
_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?"
_FLOAT_RE = re.compile(
    rf"^\s*(?P<re>[-+]?{_NUM})(?P<im>[-+]{_NUM})\*i@(?P<prec>\d+)\s*$"
)
_LITERAL_RE = re.compile(
    rf"^(?P<re>[-+]?{_NUM}(?:/\d+)?)?(?:(?P<isign>[-+])(?P<imag>{_NUM}(?:/\d+)?)?\*?i)?$"
)


def _literal_fraction(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        return Fraction(num) / Fraction(den)
    return Fraction(text)


def parse_scalar(text: str) -> FieldElement:
    """
    Parse a scalar.

    Accepts the serialization formats ("p/q+r/s*i", "<re><im>*i@<bits>",
    "p/q+r/s*w") and plain literals such as "8", "-1/8", "0.25", "3-4i", "i".
    Decimal literals are read exactly.
    """
    raw = text.strip()
    m = _EXACT_RE.match(raw)
    if m:
        re_num, re_den, sign, im_num, im_den = m.groups()
        im = Fraction(int(im_num), int(im_den))
        return GaussianRational(Fraction(int(re_num), int(re_den)), -im if sign == "-" else im)
    m = _EISENSTEIN_RE.match(raw)
    if m:
        x_num, x_den, sign, y_num, y_den = m.groups()
        y = Fraction(int(y_num), int(y_den))
        return EisensteinRational(Fraction(int(x_num), int(x_den)), -y if sign == "-" else y)
    m = _FLOAT_RE.match(raw)
    if m:
        prec = int(m.group("prec"))
        with mpmath.workprec(prec):
            return FloatScalar(mpmath.mpc(mpmath.mpf(m.group("re")), mpmath.mpf(m.group("im"))), prec)

    compact = raw.replace(" ", "")
    if compact in ("i", "+i", "-i"):
        return GaussianRational(0, -1 if compact.startswith("-") else 1)
    # "-i", "2-i": the regex needs an explicit leading sign group
    m = _LITERAL_RE.match(compact)
    if m and (m.group("re") or m.group("isign")):
        re_part = _literal_fraction(m.group("re")) if m.group("re") else Fraction(0)
        im_part = Fraction(0)
        if m.group("isign"):
            im_part = _literal_fraction(m.group("imag")) if m.group("imag") else Fraction(1)
            if m.group("isign") == "-":
                im_part = -im_part
        return GaussianRational(re_part, im_part)
    # a bare imaginary term such as "3i" or "-1/2i"
    m = re.match(rf"^(?P<sign>[-+]?)(?P<imag>{_NUM}(?:/\d+)?)\*?i$", compact)
    if m:
        im_part = _literal_fraction(m.group("imag"))
        return GaussianRational(0, -im_part if m.group("sign") == "-" else im_part)
    raise InvalidParameters(f"cannot parse scalar {text!r}")
