"""Value types shared across lommelkit modules."""

import math
from dataclasses import dataclass, field
from typing import Tuple

from lommelkit.core.errors import DomainError
from lommelkit.core.gamma import POLE_TOL


def _is_odd_negative(value: float, largest: int) -> bool:
    """True when value is within POLE_TOL of an odd integer <= largest."""
    n = round(value)
    return n <= largest and n % 2 != 0 and abs(value - n) < POLE_TOL


@dataclass(frozen=True)
class OrderPair:
    """The order pair (μ, ν) of t̃_{μ,ν} with its derived domain predicates."""

    mu: float
    nu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.nu)):
            raise DomainError(f"orders must be finite, got mu={self.mu}, nu={self.nu}")

    @property
    def series_positive(self) -> bool:
        """Every term of the t̃ series is positive: μ-ν > -3 and μ+ν > -3."""
        return self.mu - self.nu > -3.0 and self.mu + self.nu > -3.0

    @property
    def b_domain(self) -> bool:
        """μ > -2 and |ν+1| < μ+2."""
        return self.mu > -2.0 and abs(self.nu + 1.0) < self.mu + 2.0

    @property
    def a_vanishes(self) -> bool:
        """a_{μ,ν} ≡ 0: μ-ν ∈ {-1,-3,...} or μ+ν ∈ {-3,-5,...}."""
        return _is_odd_negative(self.mu - self.nu, -1) or _is_odd_negative(self.mu + self.nu, -3)

    @property
    def c(self) -> float:
        """(μ+3)² - ν², the constant of the small-x expansions."""
        return (self.mu + 3.0) ** 2 - self.nu**2

    @property
    def alpha(self) -> float:
        return 0.5 * (self.mu - self.nu + 3.0)

    @property
    def beta(self) -> float:
        return 0.5 * (self.mu + self.nu + 3.0)

    def shifted(self, dmu: float, dnu: float) -> "OrderPair":
        return OrderPair(self.mu + dmu, self.nu + dnu)

    def __str__(self) -> str:
        return f"(mu={self.mu:g}, nu={self.nu:g})"


@dataclass(frozen=True)
class Evaluation:
    """A function value with truncation diagnostics.

    The true value is ``value * exp(log_scale)``.
    """

    value: float
    log_scale: float = 0.0
    terms_used: int = 0
    tail_bound: float = 0.0
    converged: bool = True
    cancellation_digits: float = 0.0
    flags: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def scaled(self) -> bool:
        return self.log_scale != 0.0

    def true_value(self) -> float:
        """value·e^{log_scale}; overflows to ±inf beyond the double range."""
        if self.log_scale == 0.0:
            return self.value
        try:
            return self.value * math.exp(self.log_scale)
        except OverflowError:
            return math.copysign(math.inf, self.value) if self.value else 0.0

    def log_value(self) -> float:
        """log|true value|."""
        if self.value == 0.0:
            return -math.inf
        return math.log(abs(self.value)) + self.log_scale
