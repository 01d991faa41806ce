"""
Exception hierarchy for lommelkit.

Each error carries the process exit code the CLI maps it to:
0 ok, 2 domain/usage error, 3 non-convergence, 4 bound violation.
"""

from typing import Optional


class LommelError(Exception):
    """Base class for all lommelkit errors."""

    exit_code: int = 1


class DomainError(LommelError, ValueError):
    """Parameters lie outside the region where an operation is defined."""

    exit_code = 2


class NormalizationPole(DomainError):
    """A gamma factor of a normalization constant sits on a pole."""


class NonConvergence(LommelError, ArithmeticError):
    """A series exhausted its term budget before the tail bound was met."""

    exit_code = 3

    def __init__(self, message: str, terms_used: int = 0, tail_bound: Optional[float] = None):
        super().__init__(message)
        self.terms_used = terms_used
        self.tail_bound = tail_bound


class UnknownBoundId(LommelError, KeyError):
    """No catalog entry with the requested id."""

    exit_code = 2

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ""


class BoundViolation(LommelError):
    """A strict inequality failed by more than the guard band."""

    exit_code = 4


class GammaPoleDegeneracy(UserWarning):
    """A leading gamma argument is a nonpositive integer; vanishing terms are skipped."""
