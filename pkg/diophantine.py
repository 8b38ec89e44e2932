# diophantine.py
"""
Exact integer certificates for the square conditions behind the pivot
coefficients.

A pivot can only vanish when (k+1)(n+1)^2 + n is a perfect square. For the
multiplicities that survive the counting argument (2 <= k <= 4) this never
happens for n >= 1:

- k = 4: residues mod 9 of 5(n+1)^2 + n miss every square residue
- k = 3: x = 8n+9, y = 4s turns the condition into x^2 - y^2 = 17
- k = 2: x = 6n+7, y = 2s turns it into x^2 - 3y^2 = 13, settled by descent
  in Z[sqrt 3] with the unit 7 + 4 sqrt 3

Everything here is plain Python integers and Fractions.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from errors import InvalidParameters, InvalidUnit

logger = logging.getLogger(__name__)


def is_square(m: int) -> bool:
    if m < 0:
        return False
    r = math.isqrt(m)
    return r * r == m


def square_family_value(k: int, n: int) -> int:
    return (k + 1) * (n + 1) ** 2 + n


def square_family_scan(k: int, n_max: int) -> list[int]:
    """All 1 <= n <= n_max with (k+1)(n+1)^2 + n a square."""
    if k < 1 or n_max < 1:
        raise InvalidParameters("square_family_scan needs k >= 1 and n_max >= 1")
    hits = [n for n in range(1, n_max + 1) if is_square(square_family_value(k, n))]
    logger.info("square scan k=%d up to n=%d: %d hits", k, n_max, len(hits))
    return hits


# ---------- residue sieve ----------


@dataclass(frozen=True)
class SieveResult:
    k: int
    modulus: int
    value_residues: frozenset
    square_residues: frozenset

    @property
    def disjoint(self) -> bool:
        return not (self.value_residues & self.square_residues)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "modulus": self.modulus,
            "value_residues": sorted(self.value_residues),
            "square_residues": sorted(self.square_residues),
            "disjoint": self.disjoint,
        }


def residue_sieve(k: int, modulus: int) -> SieveResult:
    """Residues of (k+1)(n+1)^2 + n and of squares modulo `modulus`."""
    if modulus < 2:
        raise InvalidParameters("modulus must be >= 2")
    values = frozenset(square_family_value(k, n) % modulus for n in range(modulus))
    squares = frozenset(s * s % modulus for s in range(modulus))
    return SieveResult(k, modulus, values, squares)


def mod_sieve_k4() -> SieveResult:
    return residue_sieve(4, 9)


# ---------- difference of squares ----------


@dataclass(frozen=True)
class DiffSquaresResult:
    divisor_pairs: tuple[tuple[int, int], ...]
    solutions: tuple[tuple[int, int, int], ...]

    @property
    def positive_n_solutions(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(s for s in self.solutions if s[2] >= 1)

    def to_dict(self) -> dict:
        return {
            "divisor_pairs": [list(p) for p in self.divisor_pairs],
            "solutions": [list(s) for s in self.solutions],
            "positive_n_solutions": [list(s) for s in self.positive_n_solutions],
        }


def diff_squares(target: int, offset: int, step: int) -> DiffSquaresResult:
    """Solve x^2 - y^2 = target with x = step*n + offset, x, y > 0, n >= 0."""
    pairs = []
    solutions = []
    for q in range(1, math.isqrt(target) + 1):
        if target % q:
            continue
        p = target // q
        pairs.append((p, q))
        if (p + q) % 2:
            continue
        x, y = (p + q) // 2, (p - q) // 2
        if y <= 0 or (x - offset) % step:
            continue
        n = (x - offset) // step
        if n >= 0:
            solutions.append((x, y, n))
    return DiffSquaresResult(tuple(pairs), tuple(solutions))


def diff_squares_k3() -> DiffSquaresResult:
    """4(n+1)^2 + n = s^2  <=>  (8n+9)^2 - (4s)^2 = 17."""
    return diff_squares(17, 9, 8)


# ---------- Z[sqrt D] ----------


@dataclass(frozen=True)
class QuadraticInteger:
    """x + y sqrt(D)."""

    x: int
    y: int
    D: int = 3

    def __mul__(self, other: "QuadraticInteger") -> "QuadraticInteger":
        if self.D != other.D:
            raise InvalidParameters("cannot multiply elements of different rings")
        return QuadraticInteger(
            self.x * other.x + self.D * self.y * other.y,
            self.x * other.y + other.x * self.y,
            self.D,
        )

    def __pow__(self, exponent: int) -> "QuadraticInteger":
        result = QuadraticInteger(1, 0, self.D)
        for _ in range(exponent):
            result = result * self
        return result

    def conjugate(self) -> "QuadraticInteger":
        return QuadraticInteger(self.x, -self.y, self.D)

    def norm(self) -> int:
        return self.x * self.x - self.D * self.y * self.y

    def upper_bound(self) -> int:
        """Smallest integer >= |x| + |y| sqrt(D)."""
        s = self.y * self.y * self.D
        r = math.isqrt(s)
        return abs(self.x) + (r if r * r == s else r + 1)


Zsqrt3 = QuadraticInteger
FUNDAMENTAL_UNIT_3 = QuadraticInteger(2, 1, 3)


def zsqrt3_mul(p: QuadraticInteger, q: QuadraticInteger) -> QuadraticInteger:
    return p * q


def zsqrt3_norm(p: QuadraticInteger) -> int:
    return p.norm()


# ---------- Pell descent ----------

PARITIES = ("even", "odd", "any")


@dataclass(frozen=True)
class PellInstance:
    D: int
    N: int
    x_congruence: tuple[int, int] | None = None
    y_parity: str = "any"
    bound: Fraction = Fraction(51)
    unit: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.D < 2 or is_square(self.D):
            raise InvalidParameters(f"D must be a positive nonsquare, got {self.D}")
        if self.x_congruence is not None and self.x_congruence[1] < 1:
            raise InvalidParameters("congruence modulus must be >= 1")
        if self.y_parity not in PARITIES:
            raise InvalidParameters(f"y_parity must be one of {PARITIES}")
        object.__setattr__(self, "bound", Fraction(self.bound))
        if self.bound <= 0:
            raise InvalidParameters("bound must be positive")
        if self.N > 0 and self.bound * self.bound <= self.N:
            raise InvalidParameters(f"bound must exceed sqrt(N) = sqrt({self.N})")

    def unit_element(self) -> QuadraticInteger:
        if self.unit is not None:
            u = QuadraticInteger(self.unit[0], self.unit[1], self.D)
        elif self.D == 3:
            u = FUNDAMENTAL_UNIT_3**2
        else:
            raise InvalidParameters(f"no default unit for D = {self.D}; supply one of norm 1")
        if u.norm() != 1:
            raise InvalidUnit(f"unit {u.x}+{u.y}*sqrt({self.D}) has norm {u.norm()}, expected 1")
        if u.x <= 1 or u.y <= 0:
            raise InvalidUnit("the descent unit must exceed 1")
        return u

    def admits(self, x: int, y: int) -> bool:
        if self.x_congruence is not None:
            r, m = self.x_congruence
            if (x - r) % m:
                return False
        if self.y_parity == "even" and y % 2:
            return False
        if self.y_parity == "odd" and y % 2 == 0:
            return False
        return True

    def within_bound(self, x: int, y: int) -> bool:
        """x + y sqrt(D) <= bound, decided exactly."""
        room = self.bound - x
        return room >= 0 and y * y * self.D <= room * room

    def to_dict(self) -> dict:
        return {
            "D": self.D,
            "N": self.N,
            "x_congruence": list(self.x_congruence) if self.x_congruence else None,
            "y_parity": self.y_parity,
            "bound": str(self.bound),
            "unit": list(self.unit) if self.unit else None,
        }


@dataclass(frozen=True)
class DescentCertificate:
    instance: PellInstance
    closure_check: bool
    closure_modulus: int
    bound_check: bool
    bound_detail: str
    enumerated: int
    solutions: tuple[tuple[int, int], ...] = field(default=())

    @property
    def complete(self) -> bool:
        """Closure and bound both hold, so an empty enumeration proves emptiness."""
        return self.closure_check and self.bound_check

    def to_dict(self) -> dict:
        return {
            "instance": self.instance.to_dict(),
            "closure_check": "pass" if self.closure_check else "fail",
            "closure_modulus": self.closure_modulus,
            "bound_check": self.bound_detail,
            "bound_ok": self.bound_check,
            "enumerated": self.enumerated,
            "solutions": [list(s) for s in self.solutions],
            "complete": self.complete,
        }


def descent_step(x: int, y: int, unit: QuadraticInteger) -> tuple[int, int]:
    """(x + y sqrt D) / unit = (x + y sqrt D)(ux - uy sqrt D) for a unit of norm 1."""
    q = QuadraticInteger(x, y, unit.D) * unit.conjugate()
    return q.x, q.y


def descent_closure(inst: PellInstance, unit: QuadraticInteger) -> tuple[bool, int]:
    """Check over all residue pairs that the descent step keeps the constraints."""
    m = inst.x_congruence[1] if inst.x_congruence else 1
    modulus = 2 * math.lcm(m, 2)
    for rx in range(modulus):
        for ry in range(modulus):
            if not inst.admits(rx, ry):
                continue
            nx, ny = descent_step(rx, ry, unit)
            if not inst.admits(nx % modulus, ny % modulus):
                return False, modulus
    return True, modulus


def pell_descent(inst: PellInstance) -> tuple[list[tuple[int, int]], DescentCertificate]:
    """
    Positive solutions of x^2 - D y^2 = N with the instance constraints and
    x + y sqrt(D) <= bound, with the certificate that the bounded search is
    exhaustive.
    """
    unit = inst.unit_element()
    closure, modulus = descent_closure(inst, unit)

    # every admissible solution above the bound descends by a factor < U into (sqrt N, bound]
    U = unit.upper_bound()
    lhs = inst.bound * inst.bound
    rhs = inst.N * U * U
    bound_ok = lhs > rhs
    detail = f"{inst.bound}^2 = {lhs} {'>' if bound_ok else '<='} {U}^2*{inst.N} = {rhs}"

    solutions = []
    enumerated = 0
    x = 1
    while x <= inst.bound:
        y = 1
        while inst.within_bound(x, y):
            if inst.admits(x, y):
                enumerated += 1
                if x * x - inst.D * y * y == inst.N:
                    solutions.append((x, y))
            y += 1
        x += 1
    cert = DescentCertificate(inst, closure, modulus, bound_ok, detail, enumerated, tuple(solutions))
    logger.info(
        "pell descent D=%d N=%d: %d candidates, %d solutions, complete=%s",
        inst.D,
        inst.N,
        enumerated,
        len(solutions),
        cert.complete,
    )
    return solutions, cert


def k2_pell_instance() -> PellInstance:
    """3(n+1)^2 + n = s^2 with x = 6n+7, y = 2s: x^2 - 3y^2 = 13, x = 1 mod 6, y even."""
    return PellInstance(D=3, N=13, x_congruence=(1, 6), y_parity="even", bound=Fraction(51))


# ---------- (m, n, k) ----------


def mnk_lhs_rhs(m: int, n: int, k: int) -> tuple[Fraction, Fraction]:
    """(1 - 1/m^2)((n+1)^2 (k+1) + n) and 4(n+1)."""
    return (1 - Fraction(1, m * m)) * ((n + 1) ** 2 * (k + 1) + n), Fraction(4 * (n + 1))


def mnk_feasible(n_max: int, k_max: int, m_max: int) -> list[tuple[int, int, int]]:
    """Odd m <= m_max, 2 <= n <= n_max, 1 <= k <= k_max with equal sides."""
    if min(n_max, k_max, m_max) < 1:
        raise InvalidParameters("ranges must be >= 1")
    hits = []
    for m in range(1, m_max + 1, 2):
        for n in range(2, n_max + 1):
            for k in range(1, k_max + 1):
                # multiplied through by m^2
                if (m * m - 1) * ((n + 1) ** 2 * (k + 1) + n) == 4 * (n + 1) * m * m:
                    hits.append((m, n, k))
    return hits


@dataclass(frozen=True)
class MnkArgument:
    m1_row_zero: bool
    inequality_holds: bool
    n_max: int
    k_max: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def mnk_closed_argument(n_max: int, k_max: int) -> MnkArgument:
    """m = 1 makes the left side 0; for odd m >= 3, (8/9)(n+1)^2(k+1) > 4(n+1)."""
    m1 = all(mnk_lhs_rhs(1, n, k)[0] == 0 for n in range(2, n_max + 1) for k in range(1, k_max + 1))
    ineq = all(
        Fraction(8, 9) * (n + 1) ** 2 * (k + 1) > 4 * (n + 1)
        for n in range(2, n_max + 1)
        for k in range(1, k_max + 1)
    )
    return MnkArgument(m1, ineq, n_max, k_max)


# ---------- the (d, j, k, n) equation ----------


def dj_in_domain(d: int, j: int) -> bool:
    return j >= 1 and d > j and 2 * j <= d <= 3 * j


def dj_equation_check(d: int, j: int, k: int, n: int) -> bool:
    """d^2 j^2 (n+1)^2 ((k+1)(n+1)^2 + n) == (d^2 n + j^2 (n+1)^2 (k+1))^2."""
    if min(d, j, k, n) < 1:
        raise InvalidParameters("d, j, k, n must be positive")
    if not dj_in_domain(d, j):
        logger.debug("(d, j) = (%d, %d) is outside 2j <= d <= 3j, j < d; evaluating anyway", d, j)
    lhs = d * d * j * j * (n + 1) ** 2 * square_family_value(k, n)
    rhs = (d * d * n + j * j * (n + 1) ** 2 * (k + 1)) ** 2
    return lhs == rhs


def dj_equation_sweep(
    d_max: int, j_max: int, ks: tuple[int, ...], n_max: int, in_domain_only: bool = True
) -> list[tuple[int, int, int, int]]:
    hits = []
    for j in range(1, j_max + 1):
        for d in range(1, d_max + 1):
            if in_domain_only and not dj_in_domain(d, j):
                continue
            for k in ks:
                for n in range(1, n_max + 1):
                    if dj_equation_check(d, j, k, n):
                        hits.append((d, j, k, n))
    return hits


# ---------- bundle ----------


@dataclass(frozen=True)
class PivotCertificates:
    n_max: int
    scans: dict
    sieve_k4: SieveResult
    diff_squares_k3: DiffSquaresResult
    pell_k2: DescentCertificate

    @property
    def all_empty(self) -> bool:
        return (
            all(not hits for hits in self.scans.values())
            and self.sieve_k4.disjoint
            and not self.diff_squares_k3.positive_n_solutions
            and self.pell_k2.complete
            and not self.pell_k2.solutions
        )

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "scans": {str(k): hits for k, hits in self.scans.items()},
            "k4_mod9": self.sieve_k4.to_dict(),
            "k3_diff_squares": self.diff_squares_k3.to_dict(),
            "k2_pell": self.pell_k2.to_dict(),
            "all_empty": self.all_empty,
        }


def pivot_nonvanishing_certificates(n_max: int = 10_000) -> PivotCertificates:
    """Independent emptiness certificates for k = 2, 3, 4 plus direct scans."""
    _, pell = pell_descent(k2_pell_instance())
    return PivotCertificates(
        n_max=n_max,
        scans={k: square_family_scan(k, n_max) for k in (2, 3, 4)},
        sieve_k4=mod_sieve_k4(),
        diff_squares_k3=diff_squares_k3(),
        pell_k2=pell,
    )
