"""
Validity regions of the inequality catalog.

A region is a union of conjunctions of constraints on (μ, ν). Every
constraint is stored as a signed slack function: an inclusive constraint holds
when slack >= 0, a strict one when slack > 0. That makes every verdict
decidable and lets the boundary distance be reported.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

from lommelkit.core.types import OrderPair

BOUNDARY_PROXIMITY = 1e-9

Slack = Callable[[float, float], float]


@dataclass(frozen=True)
class Constraint:
    text: str
    slack: Slack
    strict: bool

    def holds(self, p: OrderPair) -> bool:
        s = self.slack(p.mu, p.nu)
        return s > 0.0 if self.strict else s >= 0.0

    def distance(self, p: OrderPair) -> float:
        return abs(self.slack(p.mu, p.nu))


def gt(text: str, slack: Slack) -> Constraint:
    return Constraint(text, slack, strict=True)


def ge(text: str, slack: Slack) -> Constraint:
    return Constraint(text, slack, strict=False)


@dataclass(frozen=True)
class DomainRegion:
    """Union of conjunctions of constraints over (μ, ν)."""

    alternatives: Tuple[Tuple[Constraint, ...], ...]

    @property
    def description(self) -> str:
        parts = [", ".join(c.text for c in conj) for conj in self.alternatives]
        return " or ".join(f"({part})" for part in parts) if len(parts) > 1 else parts[0]

    def contains(self, p: OrderPair) -> bool:
        return any(all(c.holds(p) for c in conj) for conj in self.alternatives)

    def failed(self, p: OrderPair) -> List[str]:
        """Constraints of the closest alternative that fail at p."""
        best: List[str] = []
        for conj in self.alternatives:
            misses = [c.text for c in conj if not c.holds(p)]
            if not misses:
                return []
            if not best or len(misses) < len(best):
                best = misses
        return best

    def near_boundary(self, p: OrderPair) -> bool:
        return any(
            c.distance(p) < BOUNDARY_PROXIMITY for conj in self.alternatives for c in conj
        )

    def __and__(self, other: "DomainRegion") -> "DomainRegion":
        return DomainRegion(
            tuple(a + b for a in self.alternatives for b in other.alternatives)
        )

    def __or__(self, other: "DomainRegion") -> "DomainRegion":
        return DomainRegion(self.alternatives + other.alternatives)


def region(*constraints: Constraint) -> DomainRegion:
    return DomainRegion((tuple(constraints),))


@dataclass(frozen=True)
class DomainVerdict:
    """Result of checking one entry's regions at an order pair."""

    entry_id: str
    lower_ok: bool
    upper_ok: bool
    near_boundary: bool
    failed_lower: Sequence[str] = field(default_factory=tuple)
    failed_upper: Sequence[str] = field(default_factory=tuple)
    has_lower: bool = True
    has_upper: bool = True
    ordered_xy: bool = True

    @property
    def valid(self) -> bool:
        return (self.lower_ok or self.upper_ok) and self.ordered_xy

    def describe(self) -> str:
        """'lower: valid, upper: invalid' style summary of the present sides."""
        sides = []
        if self.has_upper:
            sides.append(f"upper: {'valid' if self.upper_ok else 'invalid'}")
        if self.has_lower:
            sides.append(f"lower: {'valid' if self.lower_ok else 'invalid'}")
        return ", ".join(sides)


# Constraints shared by many entries.
def mu_gt(v: float, label: str) -> Constraint:
    return gt(f"mu > {label}", lambda mu, nu: mu - v)


def mu_ge(v: float, label: str) -> Constraint:
    return ge(f"mu >= {label}", lambda mu, nu: mu - v)


def mu_le(v: float, label: str) -> Constraint:
    return ge(f"mu <= {label}", lambda mu, nu: v - mu)


def nu_gt(v: float, label: str) -> Constraint:
    return gt(f"nu > {label}", lambda mu, nu: nu - v)


def nu_ge(v: float, label: str) -> Constraint:
    return ge(f"nu >= {label}", lambda mu, nu: nu - v)


NU_LT_MU_PLUS_1 = gt("nu < mu+1", lambda mu, nu: mu + 1.0 - nu)
C_GE_6 = ge("(mu+3)^2-nu^2 >= 6", lambda mu, nu: (mu + 3.0) ** 2 - nu**2 - 6.0)
C_LE_6 = ge("(mu+3)^2-nu^2 <= 6", lambda mu, nu: 6.0 - (mu + 3.0) ** 2 + nu**2)
ABS_NU_LT_MU_PLUS_3 = gt("|nu| < mu+3", lambda mu, nu: mu + 3.0 - abs(nu))

B_DOMAIN = region(
    mu_gt(-2.0, "-2"),
    gt("|nu+1| < mu+2", lambda mu, nu: mu + 2.0 - abs(nu + 1.0)),
)


def bracket(mu_min: float, mu_label: str, nu_min: float, nu_label: str, mu_strict: bool = True,
            nu_strict: bool = False) -> DomainRegion:
    """mu (>|>=) mu_min, nu (>|>=) nu_min, nu < mu+1."""
    mu_c = mu_gt(mu_min, mu_label) if mu_strict else mu_ge(mu_min, mu_label)
    nu_c = nu_gt(nu_min, nu_label) if nu_strict else nu_ge(nu_min, nu_label)
    return region(mu_c, nu_c, NU_LT_MU_PLUS_1)
