"""
Residuals of the recurrences and identities satisfied by t̃_{μ,ν}, I_ν and L_ν.

Every residual is |LHS - RHS| / max(|LHS|, |RHS|, 1e-300) with both sides
formed in extended precision from a Backend.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import mpmath
import numpy as np
from mpmath import mp, mpf

from lommelkit.core.config import EvalOptions
from lommelkit.core.errors import DomainError
from lommelkit.core.logging import get_logger
from lommelkit.core.types import OrderPair
from lommelkit.modules.evaluation import functions, oracle
from lommelkit.modules.evaluation.backend import Backend

logger = get_logger(__name__)

RESIDUAL_FLOOR = mpf("1e-300")
QUAD_DPS = 30
LOWER_LIMIT_FACTOR = 1e-12
_HEAD_TERMS = 4
RECURRENCE_TOL = 1e-12
INTEGRAL_TOL = 1e-10


@dataclass(frozen=True)
class ResidualReport:
    """Relative residual of one identity at one site."""

    name: str
    residual: float
    scale: float
    skipped: bool = False
    reason: Optional[str] = None


def _residual(lhs: mpf, rhs: mpf) -> Tuple[float, float]:
    scale = max(abs(lhs), abs(rhs), RESIDUAL_FLOOR)
    return float(abs(lhs - rhs) / scale), float(scale)


def _report(name: str, lhs: mpf, rhs: mpf) -> ResidualReport:
    residual, scale = _residual(lhs, rhs)
    return ResidualReport(name=name, residual=residual, scale=scale)


def _skipped(name: str, reason: str) -> ResidualReport:
    return ResidualReport(name=name, residual=0.0, scale=1.0, skipped=True, reason=reason)


class _Site:
    """Unnormalized t_{μ,ν} = K·t̃_{μ,ν} on top of a Backend; K is None on a gamma pole."""

    def __init__(self, p: OrderPair, x: float, backend: Backend):
        self.mu, self.nu, self.x = p.mu, p.nu, x
        self.X = mpf(x)
        self.backend = backend

    def t(self, dmu: float = 0.0, dnu: float = 0.0) -> mpf:
        return self.backend.t(self.mu + dmu, self.nu + dnu, self.x)

    def norm(self, dmu: float = 0.0, dnu: float = 0.0) -> Optional[mpf]:
        return oracle.normalization(self.mu + dmu, self.nu + dnu, self.backend.dps_for(self.x))

    def raw(self, dmu: float = 0.0, dnu: float = 0.0) -> Optional[mpf]:
        k = self.norm(dmu, dnu)
        return None if k is None else k * self.t(dmu, dnu)


def _struve_identities(s: _Site) -> List[ResidualReport]:
    b = s.backend
    a = b.a(s.mu, s.nu, s.x)
    down, up, mid = s.t(-1.0, -1.0), s.t(1.0, 1.0), s.t()
    return [
        _report("struveid1", down - up, 2 * s.nu / s.X * mid + a),
        _report("struveid2", down + up, 2 * b.dt(s.mu, s.nu, s.x) - a),
    ]


def _raw_relations(s: _Site) -> List[ResidualReport]:
    out: List[ResidualReport] = []
    mu, nu, X = s.mu, s.nu, s.X

    t_up2, t0 = s.raw(2.0, 0.0), s.raw()
    if t_up2 is None or t0 is None:
        out.append(_skipped("raw1", "normalization pole at (mu+2, nu) or (mu, nu)"))
    else:
        out.append(_report("raw1", t_up2, ((mpf(mu) + 1) ** 2 - mpf(nu) ** 2) * t0 - X ** (mu + 1)))

    t_mm, t_mp = s.raw(-1.0, -1.0), s.raw(-1.0, 1.0)
    if t0 is None or t_mm is None or t_mp is None:
        reason = "normalization pole at (mu, nu), (mu-1, nu-1) or (mu-1, nu+1)"
        out.append(_skipped("raw2", reason))
        out.append(_skipped("raw3", reason))
    else:
        c_mm = mpf(mu) + nu - 1
        c_mp = mpf(mu) - nu - 1
        out.append(_report("raw2", 2 * nu / X * t0, c_mm * t_mm - c_mp * t_mp))
        dt0 = s.norm() * s.backend.dt(mu, nu, s.x)
        out.append(_report("raw3", 2 * dt0, c_mm * t_mm + c_mp * t_mp))
    return out


def _combined_relations(s: _Site) -> List[ResidualReport]:
    mu, nu, X = s.mu, s.nu, s.X
    denom = mpf(mu) + nu + 1
    t0, t_mm, t_pp = s.raw(), s.raw(-1.0, -1.0), s.raw(1.0, 1.0)
    if abs(mu + nu + 1.0) < 1e-12 or t0 is None or t_mm is None or t_pp is None:
        reason = "mu+nu+1 = 0 or a normalization pole at (mu, nu), (mu-1, nu-1), (mu+1, nu+1)"
        return [_skipped("lomrel1", reason), _skipped("lomrel2", reason)]
    c_mm = mpf(mu) + nu - 1
    inhom = X**mu / denom
    dt0 = s.norm() * s.backend.dt(mu, nu, s.x)
    return [
        _report("lomrel1", c_mm * t_mm - t_pp / denom, 2 * nu / X * t0 + inhom),
        _report("lomrel2", c_mm * t_mm + t_pp / denom, 2 * dt0 - inhom),
    ]


def _bessel_identities(s: _Site) -> List[ResidualReport]:
    b, nu, x = s.backend, s.nu, s.x
    lo, hi, mid = b.i(nu - 1.0, x), b.i(nu + 1.0, x), b.i(nu, x)
    return [
        _report("123e", lo - hi, 2 * nu / s.X * mid),
        _report("456e", lo + hi, 2 * b.di(nu, x)),
    ]


def _special_cases(s: _Site) -> List[ResidualReport]:
    b, mu, nu, x = s.backend, s.mu, s.nu, s.x
    out = []
    T = functions.lommel_T_tilde(OrderPair(mu, nu), x, b.opts)
    T_value = mpf(T.value) * mp.exp(mpf(T.log_scale)) if T.log_scale else mpf(T.value)
    out.append(_report("T_tilde_definition", T_value, s.t() - b.i(nu, x)))
    out.append(_report("symmetry", b.t(mu, -nu, x), s.t()))
    out.append(_report("reduction_bessel_n0", b.t(nu - 1.0, nu, x), b.i(nu, x)))
    out.append(_report("reduction_bessel_n1", b.t(nu - 3.0, nu, x), b.i(nu, x)))
    if nu >= -1.5:
        out.append(_report("reduction_struve", b.l(nu, x), mpmath.struvel(nu, s.X)))
    else:
        out.append(_skipped("reduction_struve", "nu < -3/2"))
    return out


def identity_residuals(
    p: OrderPair, x: float, opts: Optional[EvalOptions] = None, backend: Optional[Backend] = None
) -> List[ResidualReport]:
    """
    Residuals of every recurrence and special case at (μ, ν, x).

    Identities whose unnormalized form needs a normalization constant at a
    gamma pole are returned with ``skipped=True`` and the reason.

    Args:
        p: Order pair.
        x: Argument, x > 0.
        opts: Evaluation options for the values; defaults to oracle mode. With
            oracle_mode off the double-precision series (scaled above the
            threshold) supply t̃ and I, and identities whose sides cancel lose
            the digits the cancellation costs.
        backend: Shared value provider.

    Returns:
        One ResidualReport per identity, in a fixed order.
    """
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"x must be finite and > 0, got {x}")
    opts = opts if opts is not None else EvalOptions(oracle_mode=True)
    backend = backend if backend is not None else Backend(opts)
    site = _Site(p, x, backend)
    with backend.precision(x):
        reports = (
            _struve_identities(site)
            + _raw_relations(site)
            + _combined_relations(site)
            + _bessel_identities(site)
            + _special_cases(site)
        )
    for report in reports:
        if report.skipped:
            logger.debug("identity_skipped", name=report.name, mu=p.mu, nu=p.nu, reason=report.reason)
    return reports


def _require_integral_domain(p: OrderPair) -> None:
    failed = []
    if not p.mu > -1.0:
        failed.append("mu > -1")
    if not p.nu >= -1.0:
        failed.append("nu >= -1")
    if not abs(p.nu) < p.mu + 1.0:
        failed.append("|nu| < mu+1")
    if failed:
        raise DomainError(f"integral identity requires {', '.join(failed)}; got {p}")


def _log_split(lo: mpf, hi: mpf) -> List[mpf]:
    """Interval endpoints lo, 10·lo, 100·lo, ..., hi."""
    points = [lo]
    step = lo * 10
    while step < hi:
        points.append(step)
        step *= 10
    points.append(hi)
    return points


def _head_integral(mu: float, nu: float, lo: mpf) -> mpf:
    """∫_0^lo u^μ I_ν(u) du from the leading terms of the Bessel series."""
    total = mpf(0)
    for k in range(_HEAD_TERMS):
        e = mpf(mu) + nu + 2 * k + 1
        total += lo**e * mpmath.rgamma(k + mpf(nu) + 1) / (e * mpf(2) ** (2 * k + nu) * mpmath.factorial(k))
    return total


def integral_identity_residual(
    p: OrderPair, x: float, opts: Optional[EvalOptions] = None, backend: Optional[Backend] = None
) -> float:
    """
    Residual of ∫_0^x u^μ I_ν(u) du = 2^{μ-1}Γ((μ-ν+1)/2)Γ((μ+ν+1)/2)·x·(I_ν t̃_{μ-1,ν-1} - I_{ν-1} t̃_{μ,ν}).

    The left side is integrated by tanh-sinh quadrature from 1e-12·x to x on
    logarithmically split subintervals; the piece below 1e-12·x is added from
    the series.

    The closed form takes its values from ``opts`` (oracle mode by default);
    in double precision it cancels about x/ln 10 digits.

    Raises:
        DomainError: outside μ > -1, ν >= -1, |ν| < μ+1.
    """
    _require_integral_domain(p)
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"x must be finite and > 0, got {x}")
    if backend is None:
        backend = Backend(opts if opts is not None else EvalOptions(oracle_mode=True))
    mu, nu = p.mu, p.nu
    with backend.precision(x):
        closed = (
            oracle.normalization(mu, nu, backend.dps_for(x))
            * x
            * (backend.i(nu, x) * backend.t(mu - 1.0, nu - 1.0, x) - backend.i(nu - 1.0, x) * backend.t(mu, nu, x))
        )
    with mp.workdps(QUAD_DPS):
        X = mpf(x)
        lo = X * LOWER_LIMIT_FACTOR
        integral = mpmath.quad(
            lambda u: u**mu * mpmath.besseli(nu, u), _log_split(lo, X), method="tanh-sinh"
        )
        integral += _head_integral(mu, nu, lo)
        residual, _ = _residual(integral, +closed)
    logger.debug("integral_identity", mu=mu, nu=nu, x=x, residual=residual)
    return residual


def wronskian_special_residual(nu: float, x: float, opts: Optional[EvalOptions] = None) -> float:
    """
    Residual of I_ν I_{1-ν} - I_{ν-1} I_{-ν} = -2 sin(πν)/(πx) for -1 < ν < 0.

    The left side cancels about 2x/ln 10 digits, so the working precision is
    raised by that amount.
    """
    if not -1.0 < nu < 0.0:
        raise DomainError(f"wronskian identity requires -1 < nu < 0, got nu={nu}")
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"x must be finite and > 0, got {x}")
    opts = opts if opts is not None else EvalOptions()
    dps = opts.oracle_dps + int(2.0 * x / math.log(10.0)) + 5
    with mp.workdps(dps):
        lhs = oracle.bessel_i(nu, x, dps) * oracle.bessel_i(1.0 - nu, x, dps) - oracle.bessel_i(
            nu - 1.0, x, dps
        ) * oracle.bessel_i(-nu, x, dps)
        rhs = -2 * mp.sinpi(mpf(nu)) / (mp.pi * mpf(x))
        residual, _ = _residual(lhs, rhs)
    return residual


def ratio_integral_residual(p: OrderPair, x: float, y: float, dps: int = QUAD_DPS) -> float:
    """
    Residual of the two integrated logarithmic-derivative forms of t̃(x)/t̃(y).

    The forms are (y/x)^ν exp(-∫_x^y t̃_{μ-1,ν-1}/t̃ du) and
    (x/y)^ν exp(-2∫_x^y b/u du - ∫_x^y t̃_{μ+1,ν+1}/t̃ du); the larger of the
    two residuals against the direct ratio is returned.

    Raises:
        DomainError: unless 0 < x < y and every term of the t̃ series is positive.
    """
    if not p.series_positive:
        raise DomainError(f"ratio integral requires mu-nu > -3 and mu+nu > -3, got {p}")
    if not (0.0 < x < y and math.isfinite(y)):
        raise DomainError(f"ratio integral requires 0 < x < y, got x={x}, y={y}")
    mu, nu = p.mu, p.nu

    def t(dmu: float, dnu: float, u: mpf) -> mpf:
        return oracle.t_tilde(mu + dmu, nu + dnu, float(u), dps)

    def down(u: mpf) -> mpf:
        return t(-1.0, -1.0, u) / t(0.0, 0.0, u)

    def up_and_b(u: mpf) -> mpf:
        base = t(0.0, 0.0, u)
        a = oracle.coeff_a(mu, nu, float(u), dps)
        return t(1.0, 1.0, u) / base + a / base

    with mp.workdps(dps):
        X, Y = mpf(x), mpf(y)
        direct = t(0.0, 0.0, X) / t(0.0, 0.0, Y)
        form_down = (Y / X) ** nu * mp.exp(-mpmath.quad(down, [X, Y], method="tanh-sinh"))
        # 2b/u = a/t̃
        form_up = (X / Y) ** nu * mp.exp(-mpmath.quad(up_and_b, [X, Y], method="tanh-sinh"))
        first, _ = _residual(form_down, direct)
        second, _ = _residual(form_up, direct)
    return max(first, second)


@dataclass(frozen=True)
class ResidualFailure:
    name: str
    mu: float
    nu: float
    x: float
    residual: float


@dataclass
class IdentitySuiteReport:
    points: int = 0
    checks: int = 0
    skipped: int = 0
    failures: List[ResidualFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def identity_suite(
    seed: int = 42,
    samples: int = 1000,
    opts: Optional[EvalOptions] = None,
    tol: float = RECURRENCE_TOL,
    integral_tol: float = INTEGRAL_TOL,
    x_max: float = 60.0,
) -> IdentitySuiteReport:
    """
    Check every identity at seeded random sites.

    Recurrences and special cases run at ``samples`` sites with
    μ ∈ (-1.5, 15], ν ∈ (-1.5, μ+1.5), x ∈ (0, x_max]; the integral and
    Wronskian identities run at a tenth as many sites inside their domains.
    ``opts`` defaults to oracle mode.
    """
    opts = opts if opts is not None else EvalOptions(oracle_mode=True)
    rng = np.random.default_rng(seed)
    report = IdentitySuiteReport()

    def record(name: str, mu: float, nu: float, x: float, residual: float, limit: float) -> None:
        report.checks += 1
        if not residual <= limit:
            report.failures.append(ResidualFailure(name, mu, nu, x, residual))
            logger.warning("identity_residual_exceeded", name=name, mu=mu, nu=nu, x=x, residual=residual)

    for _ in range(samples):
        mu = float(rng.uniform(-1.5, 15.0))
        nu = float(rng.uniform(-1.5, mu + 1.5))
        x = float(rng.uniform(0.0, x_max)) or x_max
        report.points += 1
        for r in identity_residuals(OrderPair(mu, nu), x, opts):
            if r.skipped:
                report.skipped += 1
            else:
                record(r.name, mu, nu, x, r.residual, tol)

    for _ in range(max(1, samples // 10)):
        mu = float(rng.uniform(-0.9, 15.0))
        nu = float(rng.uniform(max(-1.0, -mu - 1.0) + 1e-3, mu + 1.0 - 1e-3))
        x = float(rng.uniform(0.05, x_max))
        residual = integral_identity_residual(OrderPair(mu, nu), x, opts)
        record("integral_identity", mu, nu, x, residual, integral_tol)

        nu_w = float(rng.uniform(-0.999, -0.001))
        x_w = float(rng.uniform(0.0, x_max)) or x_max
        record("wronskian_special", nu_w, nu_w, x_w, wronskian_special_residual(nu_w, x_w, opts), tol)

    logger.info(
        "identity_suite_finished", seed=seed, points=report.points, checks=report.checks,
        skipped=report.skipped, failures=len(report.failures),
    )
    return report
