"""
Small- and large-argument expansions, bound gaps and fitted decay orders.

Expansions are evaluated exactly as truncated; ``relative_error`` compares
them with the extended-precision value of the quantity they approximate.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
from mpmath import mp, mpf

from lommelkit.core.config import EvalOptions
from lommelkit.core.errors import DomainError
from lommelkit.core.gamma import is_nonpositive_integer
from lommelkit.core.logging import get_logger
from lommelkit.core.types import OrderPair
from lommelkit.modules.evaluation.backend import Backend

logger = get_logger(__name__)

MIN_GRID_POINTS = 4


class ExpansionKind(str, Enum):
    T_SMALL = "T_SMALL"
    T_LARGE = "T_LARGE"
    I_SMALL = "I_SMALL"
    I_LARGE = "I_LARGE"
    B_SMALL = "B_SMALL"
    B_LARGE = "B_LARGE"
    H_SMALL = "H_SMALL"
    LA_SMALL = "LA_SMALL"
    LB_SMALL = "LB_SMALL"
    M_LARGE = "M_LARGE"
    C_SMALL = "C_SMALL"
    C_LARGE = "C_LARGE"


class GapKind(str, Enum):
    """Relative width u/l - 1 of a two-sided ratio bound."""

    GAP_A = "gap_a"
    GAP_B = "gap_b"


@dataclass(frozen=True)
class OrderFit:
    """Least-squares fit log g = order·log x + log constant."""

    order: float
    constant: float
    slopes: Tuple[float, ...]


# Domains: each returns the violated conditions at p.
def _t_small_domain(p: OrderPair) -> list:
    failed = []
    if not p.mu > -3.0:
        failed.append("mu > -3")
    if not abs(p.nu) < p.mu + 3.0:
        failed.append("|nu| < mu+3")
    return failed


def _t_large_domain(p: OrderPair) -> list:
    failed = []
    if is_nonpositive_integer(0.5 * (p.mu - p.nu + 1.0)):
        failed.append("(mu-nu+1)/2 not a nonpositive integer")
    if is_nonpositive_integer(0.5 * (p.mu + p.nu + 1.0)):
        failed.append("(mu+nu+1)/2 not a nonpositive integer")
    return failed


def _i_small_domain(p: OrderPair) -> list:
    return ["nu not a negative integer"] if is_nonpositive_integer(p.nu + 1.0) else []


def _any(p: OrderPair) -> list:
    return []


def _b_domain(p: OrderPair) -> list:
    return [] if p.b_domain else ["mu > -2 and |nu+1| < mu+2"]


def _h_small_domain(p: OrderPair) -> list:
    failed = []
    if not p.mu > -2.0:
        failed.append("mu > -2")
    if not abs(p.nu - 1.0) < p.mu + 2.0:
        failed.append("|nu-1| < mu+2")
    if not abs(p.nu) < p.mu + 3.0:
        failed.append("|nu| < mu+3")
    return failed


def _ratio_lower_domain(p: OrderPair) -> list:
    failed = []
    if not p.mu > -1.0:
        failed.append("mu > -1")
    if not 0.0 <= p.nu < p.mu + 1.0:
        failed.append("0 <= nu < mu+1")
    return failed


def _m_large_domain(p: OrderPair) -> list:
    return ["nu not in {-1/2, -3/2, ...}"] if is_nonpositive_integer(p.nu + 0.5) else []


def _gap_b_domain(p: OrderPair) -> list:
    failed = []
    if not p.mu > -0.5:
        failed.append("mu > -1/2")
    if not 0.5 <= p.nu < p.mu + 1.0:
        failed.append("1/2 <= nu < mu+1")
    return failed


def _rg(p: OrderPair) -> mpf:
    out = mpf(1)
    for arg in (p.alpha, p.beta):
        if is_nonpositive_integer(arg):
            return mpf(0)
        out *= mpmath.rgamma(arg)
    return out


def _large(nu: float, X: mpf) -> mpf:
    n2 = 4 * mpf(nu) ** 2
    return mp.exp(X) / mp.sqrt(2 * mp.pi * X) * (1 - (n2 - 1) / (8 * X) + (n2 - 1) * (n2 - 9) / (128 * X**2))


def _t_small(p: OrderPair, X: mpf) -> mpf:
    return _rg(p) * (X / 2) ** (p.mu + 1) * (1 + X**2 / p.c)


def _i_small(p: OrderPair, X: mpf) -> mpf:
    return X**p.nu / (mpf(2) ** p.nu * mpmath.gamma(p.nu + 1.0))


def _b_small(p: OrderPair, X: mpf) -> mpf:
    return (mpf(p.mu) - p.nu + 1) / 2 * (1 - X**2 / p.c)


def _b_large(p: OrderPair, X: mpf) -> mpf:
    ga = 0.5 * (p.mu - p.nu + 1.0)
    gb = 0.5 * (p.mu + p.nu + 3.0)
    if is_nonpositive_integer(ga) or is_nonpositive_integer(gb):
        return mpf(0)
    return (
        mp.sqrt(mp.pi) * X ** (mpf(p.mu) + 1.5) * mp.exp(-X) * mpmath.rgamma(ga) * mpmath.rgamma(gb)
        / mpf(2) ** (mpf(p.mu) + 0.5)
    )


def _h_small(p: OrderPair, X: mpf) -> mpf:
    s = mpf(p.mu) + p.nu + 1
    return X / s - 2 * X**3 / (s**2 * p.c)


def _la_small(p: OrderPair, X: mpf) -> mpf:
    s = mpf(p.mu) + p.nu + 1
    num = (mpf(p.mu) - p.nu) ** 2 + 4 * mpf(p.mu) + 7
    return X / s - num * X**3 / (2 * (mpf(p.nu) + 1) * s**2 * p.c)


def _lb_small(p: OrderPair, X: mpf) -> mpf:
    s = mpf(p.mu) + p.nu + 1
    num = (mpf(p.mu) - p.nu) ** 2 + 5 * mpf(p.mu) - p.nu + 8
    return X / s - num * X**3 / ((2 * mpf(p.nu) + 1) * s**2 * p.c)


def _m_large(p: OrderPair, X: mpf) -> mpf:
    return -((X / 2) ** (mpf(p.nu) - 1)) / (mp.sqrt(mp.pi) * mpmath.gamma(mpf(p.nu) + 0.5))


def _c_small(p: OrderPair, X: mpf) -> mpf:
    return mpf(p.mu) + 1 + 2 * X**2 / p.c


def _c_large(p: OrderPair, X: mpf) -> mpf:
    return X - mpf(1) / 2 + (4 * mpf(p.nu) ** 2 - 1) / (8 * X)


_Formula = Callable[[OrderPair, mpf], mpf]
_Domain = Callable[[OrderPair], list]

_EXPANSIONS: Dict[ExpansionKind, Tuple[_Formula, _Domain]] = {
    ExpansionKind.T_SMALL: (_t_small, _t_small_domain),
    ExpansionKind.T_LARGE: (lambda p, X: _large(p.nu, X), _t_large_domain),
    ExpansionKind.I_SMALL: (_i_small, _i_small_domain),
    ExpansionKind.I_LARGE: (lambda p, X: _large(p.nu, X), _any),
    ExpansionKind.B_SMALL: (_b_small, _b_domain),
    ExpansionKind.B_LARGE: (_b_large, _b_domain),
    ExpansionKind.H_SMALL: (_h_small, _h_small_domain),
    ExpansionKind.LA_SMALL: (_la_small, _ratio_lower_domain),
    ExpansionKind.LB_SMALL: (_lb_small, _ratio_lower_domain),
    ExpansionKind.M_LARGE: (_m_large, _m_large_domain),
    ExpansionKind.C_SMALL: (_c_small, _t_small_domain),
    ExpansionKind.C_LARGE: (_c_large, _any),
}


def _check(failed: list, what: str, p: OrderPair) -> None:
    if failed:
        raise DomainError(f"{what} requires {', '.join(failed)}; got {p}")


def _check_x(x: float) -> None:
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"x must be finite and > 0, got {x}")


def asymptotic(kind: ExpansionKind, p: OrderPair, x: float) -> float:
    """
    Evaluate a truncated expansion.

    Args:
        kind: Which expansion.
        p: Order pair; I_*, M_LARGE and C_LARGE read only ν.
        x: Argument, x > 0.

    Raises:
        DomainError: outside the expansion's parameter domain.
    """
    kind = ExpansionKind(kind)
    formula, domain = _EXPANSIONS[kind]
    _check(domain(p), kind.value, p)
    _check_x(x)
    with mp.workdps(30):
        return float(formula(p, mpf(x)))


def _exact(kind: ExpansionKind, p: OrderPair, x: float, backend: Backend) -> mpf:
    mu, nu = p.mu, p.nu
    if kind in (ExpansionKind.T_SMALL, ExpansionKind.T_LARGE):
        return backend.t(mu, nu, x)
    if kind in (ExpansionKind.I_SMALL, ExpansionKind.I_LARGE):
        return backend.i(nu, x)
    if kind in (ExpansionKind.B_SMALL, ExpansionKind.B_LARGE):
        return backend.b(mu, nu, x)
    if kind is ExpansionKind.H_SMALL:
        return backend.t(mu, nu, x) / backend.t(mu - 1.0, nu - 1.0, x)
    if kind is ExpansionKind.LA_SMALL:
        return 1 / (backend.i(nu - 1.0, x) / backend.i(nu, x) + 2 * backend.b(mu, nu, x) / x)
    if kind is ExpansionKind.LB_SMALL:
        s = mp.sqrt((mpf(nu) + 0.5) ** 2 + mpf(x) ** 2)
        return x / (mpf(nu) - 0.5 + 2 * backend.b(mu, nu, x) + s)
    if kind is ExpansionKind.M_LARGE:
        return backend.l(nu, x) - backend.i(nu, x)
    return x * backend.t(mu - 1.0, nu - 1.0, x) / backend.t(mu, nu, x) - nu


def relative_error(
    kind: ExpansionKind, p: OrderPair, x: float, backend: Optional[Backend] = None
) -> float:
    """|expansion/exact - 1| with the exact value in extended precision."""
    kind = ExpansionKind(kind)
    formula, domain = _EXPANSIONS[kind]
    _check(domain(p), kind.value, p)
    _check_x(x)
    backend = backend if backend is not None else Backend(EvalOptions(oracle_mode=True))
    with backend.precision(x):
        exact = _exact(kind, p, x, backend)
        return float(abs(formula(p, mpf(x)) / exact - 1))


def gap_a(p: OrderPair, x: float, backend: Optional[Backend] = None) -> float:
    """u^a/l^a - 1 = (2b/x)·I_ν/I_{ν-1} for the Bessel-ratio bracket of h."""
    _check(_ratio_lower_domain(p), "gap_a", p)
    _check_x(x)
    backend = backend if backend is not None else Backend(EvalOptions(oracle_mode=True))
    with backend.precision(x):
        return float(2 * backend.b(p.mu, p.nu, x) / x * backend.i(p.nu, x) / backend.i(p.nu - 1.0, x))


def gap_b(p: OrderPair, x: float, backend: Optional[Backend] = None) -> float:
    """u^b/l^b - 1 for the square-root bracket of h."""
    _check(_gap_b_domain(p), "gap_b", p)
    _check_x(x)
    backend = backend if backend is not None else Backend(EvalOptions(oracle_mode=True))
    with backend.precision(x):
        X = mpf(x)
        nu = mpf(p.nu)
        s_minus = mp.sqrt((nu - 0.5) ** 2 + X**2)
        s_plus = mp.sqrt((nu + 0.5) ** 2 + X**2)
        b = backend.b(p.mu, p.nu, x)
        return float((2 * b + s_plus - s_minus) / (nu - 0.5 + s_minus))


_GAPS = {GapKind.GAP_A: gap_a, GapKind.GAP_B: gap_b}


def order_check(
    kind: Union[ExpansionKind, GapKind], p: OrderPair, x_grid: Sequence[float],
    backend: Optional[Backend] = None,
) -> OrderFit:
    """
    Fit the power-law decay of a gap or of an expansion's relative error.

    Args:
        kind: A GapKind, or an ExpansionKind whose relative error is fitted.
        p: Order pair.
        x_grid: Increasing arguments, at least four.

    Returns:
        OrderFit with the fitted order, constant and the successive log-log
        slopes (a divergent slope sequence signals faster-than-power decay).

    Raises:
        DomainError: bad grid or parameters outside the quantity's domain.
    """
    xs = np.asarray(list(x_grid), dtype=float)
    if xs.size < MIN_GRID_POINTS:
        raise DomainError(f"order_check needs at least {MIN_GRID_POINTS} points, got {xs.size}")
    if np.any(xs <= 0.0) or np.any(np.diff(xs) <= 0.0):
        raise DomainError("order_check needs a positive, strictly increasing grid")
    backend = backend if backend is not None else Backend(EvalOptions(oracle_mode=True))

    if isinstance(kind, GapKind) or kind in {g.value for g in GapKind}:
        gap = _GAPS[GapKind(kind)]
        values = np.array([gap(p, float(x), backend) for x in xs])
    else:
        values = np.array([relative_error(kind, p, float(x), backend) for x in xs])
    if np.any(values <= 0.0):
        raise DomainError(f"{kind} vanishes on the grid; no decay order to fit")

    log_x = np.log(xs)
    log_g = np.log(values)
    order, intercept = np.polyfit(log_x, log_g, 1)
    slopes = tuple(float(s) for s in np.diff(log_g) / np.diff(log_x))
    fit = OrderFit(order=float(order), constant=float(np.exp(intercept)), slopes=slopes)
    logger.debug("order_fit", kind=str(kind), mu=p.mu, nu=p.nu, order=fit.order, constant=fit.constant)
    return fit
