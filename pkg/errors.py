# errors.py
"""
Exception hierarchy for sharelab.

Library code raises these; the CLI turns them into exit code 3 and the HTTP
API into a 400 response.
"""
from __future__ import annotations

from typing import Iterable


class ShareLabError(Exception):
    """Base class for every error raised on purpose by sharelab."""


class MixedRegime(ShareLabError, TypeError):
    def __init__(self, left: str, right: str):
        super().__init__(f"cannot combine {left} and {right} scalars; convert explicitly")
        self.left = left
        self.right = right


class LeadingZero(ShareLabError, ValueError):
    pass


class NoConvergence(ShareLabError):
    def __init__(self, degree: int, iterations: int, worst_residual: object):
        super().__init__(
            f"root solver did not certify a degree-{degree} polynomial after "
            f"{iterations} iterations (worst residual {worst_residual})"
        )
        self.degree = degree
        self.iterations = iterations
        self.worst_residual = worst_residual


class ZeroLambda(ShareLabError, ValueError):
    pass


class ParseError(ShareLabError, ValueError):
    def __init__(self, message: str, offset: int, expected: Iterable[str] = ()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


class NonEntire(ShareLabError, ValueError):
    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


class DegenerateCandidate(ShareLabError, ValueError):
    pass


class AllSamplesDegenerate(ShareLabError):
    pass


class InvalidParameters(ShareLabError, ValueError):
    pass


class DegenerateDenominator(ShareLabError, ZeroDivisionError):
    pass


class DegenerateParameters(ShareLabError, ValueError):
    pass


class PivotVanished(ShareLabError, ArithmeticError):
    """The linear coefficient of f^(n+1) vanished while extending a jet."""

    def __init__(self, n: int, k: int, a: object, b: object):
        super().__init__(
            f"pivot coefficient vanished at n={n} (k={k}, a={a}, b={b}); "
            f"this is the exceptional case a = -(n+1)^2 (k+1) b / n, "
            f"see `diophantine squares --k {k}`"
        )
        self.n = n
        self.k = k
        self.a = a
        self.b = b


class InvalidUnit(ShareLabError, ValueError):
    pass


class NewtonBudgetExceeded(ShareLabError):
    def __init__(self, seed: object, iterations: int):
        super().__init__(f"Newton iteration from {seed} did not converge in {iterations} steps")
        self.seed = seed
        self.iterations = iterations
