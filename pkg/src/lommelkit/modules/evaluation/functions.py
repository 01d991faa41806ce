"""
Public evaluation routines for modified Lommel, Bessel and Struve functions.

All functions take an EvalOptions; with ``oracle_mode`` set they evaluate
through the extended-precision oracle and round the result to double.
Results above ``scaling_threshold`` are returned as e^{-x}·f(x) with
``log_scale = x``.
"""

import math
import warnings
from enum import Enum
from typing import Optional, Tuple

from mpmath import mp, mpf

from lommelkit.core.config import EvalOptions
from lommelkit.core.errors import DomainError, GammaPoleDegeneracy, NormalizationPole
from lommelkit.core.gamma import is_nonpositive_integer, recip_gamma
from lommelkit.core.logging import get_logger
from lommelkit.core.types import Evaluation, OrderPair
from lommelkit.modules.evaluation import oracle, series

logger = get_logger(__name__)

CANCELLATION_WARN_DIGITS = 6.0
CONDITION_CROSSCHECK_TOL = 1e-12


class ConditionKind(str, Enum):
    LOMMEL_T_TILDE = "lommel_t_tilde"
    BESSEL_I = "bessel_i"


def _options(opts: Optional[EvalOptions]) -> EvalOptions:
    return opts if opts is not None else EvalOptions()


def _check_x(x: float) -> None:
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"x must be finite and > 0, got {x}")


def _from_oracle(value: mpf, x: float, opts: EvalOptions, terms: int = 0, tail: float = 0.0,
                 flags: tuple = ()) -> Evaluation:
    shift = x if x > opts.scaling_threshold else 0.0
    with mp.workdps(opts.oracle_dps):
        scaled = value * mp.exp(-shift) if shift else value
        return Evaluation(
            value=float(scaled), log_scale=shift, terms_used=terms, tail_bound=tail,
            converged=True, flags=flags,
        )


def _gamma_series(power: float, alpha: float, beta: float, x: float, opts: EvalOptions,
                  flags: tuple = ()) -> Evaluation:
    if opts.oracle_mode:
        value, used, tail = oracle.gamma_series_with_diagnostics(
            power, alpha, beta, x, opts.oracle_dps, max(opts.max_terms, 100_000)
        )
        return _from_oracle(value, x, opts, used, min(tail, opts.rel_tol), flags)
    result = series.gamma_series(power, alpha, beta, x, opts)
    if result.log_scale:
        logger.debug("scaled_path_selected", x=x, log_scale=result.log_scale)
    return Evaluation(
        value=result.value,
        log_scale=result.log_scale,
        terms_used=result.terms_used,
        tail_bound=result.tail_bound,
        converged=result.tail_bound <= opts.rel_tol,
        flags=flags,
    )


def bessel_i(nu: float, x: float, opts: Optional[EvalOptions] = None) -> Evaluation:
    """
    Modified Bessel function of the first kind I_ν(x).

    Args:
        nu: Real order; negative integers use I_{-n} = I_n.
        x: Argument, x > 0.
        opts: Evaluation options.

    Returns:
        Evaluation of I_ν(x).
    """
    opts = _options(opts)
    _check_x(x)
    if is_nonpositive_integer(nu):
        nu = abs(round(nu))
    return _gamma_series(nu, 1.0, nu + 1.0, x, opts)


def lommel_t_tilde(p: OrderPair, x: float, opts: Optional[EvalOptions] = None) -> Evaluation:
    """
    Normalized modified Lommel function t̃_{μ,ν}(x).

    Parameters outside series_positive are evaluated anyway and flagged
    ``sign_not_guaranteed``. A leading gamma argument on a pole raises a
    GammaPoleDegeneracy warning; the vanishing terms are skipped.

    Args:
        p: Order pair.
        x: Argument, x > 0.
        opts: Evaluation options.

    Returns:
        Evaluation of t̃_{μ,ν}(x).
    """
    opts = _options(opts)
    _check_x(x)
    flags = []
    if not p.series_positive:
        flags.append("sign_not_guaranteed")
    for name, arg in (("alpha", p.alpha), ("beta", p.beta)):
        if is_nonpositive_integer(arg):
            flags.append("gamma_pole")
            warnings.warn(
                f"gamma argument {name}={arg:g} of t̃{p} is a pole; vanishing terms skipped",
                GammaPoleDegeneracy,
                stacklevel=2,
            )
            logger.info("gamma_pole_degeneracy", mu=p.mu, nu=p.nu, argument=name, value=arg)
            break
    return _gamma_series(p.mu + 1.0, p.alpha, p.beta, x, opts, tuple(flags))


def struve_l(nu: float, x: float, opts: Optional[EvalOptions] = None) -> Evaluation:
    """Modified Struve function L_ν(x) = t̃_{ν,ν}(x), ν >= -3/2."""
    if nu < -1.5:
        raise DomainError(f"struve_l requires nu >= -3/2, got nu={nu}")
    return lommel_t_tilde(OrderPair(nu, nu), x, opts)


def normalization_constant(p: OrderPair) -> float:
    """2^{μ-1}Γ((μ-ν+1)/2)Γ((μ+ν+1)/2), the factor relating t to t̃.

    Raises:
        NormalizationPole: if either gamma argument is a nonpositive integer.
    """
    ga = 0.5 * (p.mu - p.nu + 1.0)
    gb = 0.5 * (p.mu + p.nu + 1.0)
    for name, arg in (("(mu-nu+1)/2", ga), ("(mu+nu+1)/2", gb)):
        if is_nonpositive_integer(arg):
            raise NormalizationPole(f"gamma argument {name}={arg:g} is a pole for {p}")
    return 2.0 ** (p.mu - 1.0) / (recip_gamma(ga) * recip_gamma(gb))


def lommel_t(p: OrderPair, x: float, opts: Optional[EvalOptions] = None) -> Evaluation:
    """Unnormalized modified Lommel function t_{μ,ν}(x)."""
    opts = _options(opts)
    k = normalization_constant(p)
    tilde = lommel_t_tilde(p, x, opts)
    if math.isfinite(k):
        return Evaluation(
            value=tilde.value * k, log_scale=tilde.log_scale, terms_used=tilde.terms_used,
            tail_bound=tilde.tail_bound, converged=tilde.converged, flags=tilde.flags,
        )
    # fold an overflowing constant into the scale
    log_k = (p.mu - 1.0) * math.log(2.0) + math.lgamma(0.5 * (p.mu - p.nu + 1.0)) + math.lgamma(
        0.5 * (p.mu + p.nu + 1.0)
    )
    sign = math.copysign(1.0, recip_gamma(0.5 * (p.mu - p.nu + 1.0)) * recip_gamma(0.5 * (p.mu + p.nu + 1.0)))
    return Evaluation(
        value=tilde.value * sign, log_scale=tilde.log_scale + log_k, terms_used=tilde.terms_used,
        tail_bound=tilde.tail_bound, converged=tilde.converged, flags=tilde.flags,
    )


def _difference(p: OrderPair, x: float, opts: EvalOptions) -> Evaluation:
    if opts.oracle_mode:
        # cancellation costs about x/ln(10) digits
        dps = opts.oracle_dps + int(x / math.log(10.0)) + 5
        with mp.workdps(dps):
            t = oracle.t_tilde(p.mu, p.nu, x, dps)
            i = oracle.bessel_i(p.nu, x, dps)
            diff = t - i
            scale = max(abs(t), abs(i))
            digits = float(mp.log10(scale / abs(diff))) if diff else math.inf
            ev = _from_oracle(diff, x, opts.replace(oracle_dps=dps))
        return Evaluation(value=ev.value, log_scale=ev.log_scale, tail_bound=0.0,
                          converged=True, cancellation_digits=digits)

    t = lommel_t_tilde(p, x, opts)
    i = bessel_i(p.nu, x, opts)
    diff = t.value - i.value
    scale = max(abs(t.value), abs(i.value))
    digits = math.log10(scale / abs(diff)) if diff else math.inf
    if diff:
        tail = (t.tail_bound * abs(t.value) + i.tail_bound * abs(i.value)) / abs(diff)
    else:
        tail = math.inf
    return Evaluation(
        value=diff,
        log_scale=t.log_scale,
        terms_used=max(t.terms_used, i.terms_used),
        tail_bound=tail,
        converged=tail <= opts.rel_tol,
        cancellation_digits=digits,
        flags=t.flags,
    )


def lommel_T_tilde(p: OrderPair, x: float, opts: Optional[EvalOptions] = None) -> Evaluation:
    """
    T̃_{μ,ν}(x) = t̃_{μ,ν}(x) - I_ν(x), formed at a common log_scale.

    Flags ``cancellation`` and logs a warning when more than six decimal
    digits cancel. In oracle mode the working precision is raised by the
    number of digits the subtraction is expected to lose.
    """
    opts = _options(opts)
    _check_x(x)
    result = _difference(p, x, opts)
    if result.cancellation_digits > CANCELLATION_WARN_DIGITS:
        logger.warning(
            "cancellation",
            function="T_tilde",
            mu=p.mu,
            nu=p.nu,
            x=x,
            digits=round(result.cancellation_digits, 2),
        )
        result = Evaluation(
            value=result.value, log_scale=result.log_scale, terms_used=result.terms_used,
            tail_bound=result.tail_bound, converged=result.converged,
            cancellation_digits=result.cancellation_digits, flags=result.flags + ("cancellation",),
        )
    return result


def struve_m(nu: float, x: float, opts: Optional[EvalOptions] = None) -> Evaluation:
    """M_ν(x) = L_ν(x) - I_ν(x)."""
    return lommel_T_tilde(OrderPair(nu, nu), x, opts)


def coeff_a(p: OrderPair, x: float) -> float:
    """a_{μ,ν}(x) = (x/2)^μ/(Γ((μ-ν+1)/2)Γ((μ+ν+3)/2)); exactly 0 on the exceptional lines."""
    _check_x(x)
    if p.a_vanishes:
        return 0.0
    ra = recip_gamma(0.5 * (p.mu - p.nu + 1.0))
    rb = recip_gamma(0.5 * (p.mu + p.nu + 3.0))
    try:
        return (0.5 * x) ** p.mu * ra * rb
    except OverflowError:
        return math.copysign(math.inf, ra * rb)


def ratio_b(p: OrderPair, x: float, opts: Optional[EvalOptions] = None) -> float:
    """
    b_{μ,ν}(x) = x·a_{μ,ν}(x)/(2t̃_{μ,ν}(x)).

    Evaluated as (μ-ν+1)/2 divided by the Pochhammer series
    sum (x/2)^{2k}/(((μ-ν+3)/2)_k((μ+ν+3)/2)_k), which has no cancellation.

    Raises:
        DomainError: outside b_domain (μ > -2, |ν+1| < μ+2).
    """
    opts = _options(opts)
    _check_x(x)
    if not p.b_domain:
        raise DomainError(f"ratio_b requires mu > -2 and |nu+1| < mu+2, got {p}")
    half = 0.5 * (p.mu - p.nu + 1.0)
    if opts.oracle_mode:
        return float(oracle.ratio_b(p.mu, p.nu, x, opts.oracle_dps))
    s = series.pochhammer_series(p.alpha, p.beta, x, opts)
    if not s.log_scale:
        return half / s.value
    return half * math.exp(-s.log_scale - math.log(s.value))


def _t_tilde_scaled(p: OrderPair, x: float, opts: EvalOptions, shift: float) -> float:
    """t̃_{μ,ν}(x)·e^{-shift}, without the GammaPoleDegeneracy warning."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GammaPoleDegeneracy)
        ev = lommel_t_tilde(p, x, opts)
    if ev.log_scale == shift:
        return ev.value
    return ev.value * math.exp(ev.log_scale - shift)


def _derivative_scaled(p: OrderPair, x: float, opts: EvalOptions) -> tuple[float, float]:
    """Return (e^{-shift}·t̃′, shift) from 2t̃′ = t̃_{μ-1,ν-1} + t̃_{μ+1,ν+1} + a_{μ,ν}."""
    shift = x if x > opts.scaling_threshold else 0.0
    lower = _t_tilde_scaled(p.shifted(-1.0, -1.0), x, opts, shift)
    upper = _t_tilde_scaled(p.shifted(1.0, 1.0), x, opts, shift)
    a = coeff_a(p, x)
    a_scaled = a * math.exp(-shift) if shift else a
    return 0.5 * (lower + upper + a_scaled), shift


def t_tilde_derivative(p: OrderPair, x: float, opts: Optional[EvalOptions] = None) -> float:
    """
    t̃′_{μ,ν}(x) from the recurrence 2t̃′ = t̃_{μ-1,ν-1} + t̃_{μ+1,ν+1} + a_{μ,ν}.

    Returns the true derivative; beyond x ≈ 709 it overflows to inf.
    """
    opts = _options(opts)
    _check_x(x)
    value, shift = _derivative_scaled(p, x, opts)
    if not shift:
        return value
    try:
        return value * math.exp(shift)
    except OverflowError:
        return math.copysign(math.inf, value)


def condition_number_forms(
    kind: ConditionKind | str, p: OrderPair, x: float, opts: Optional[EvalOptions] = None
) -> Tuple[float, float]:
    """
    Both expressions of C(f) = x f′(x)/f(x).

    Returns:
        (downward, upward): x f_{μ-1,ν-1}/f - ν and x f_{μ+1,ν+1}/f + ν + 2b,
        with 2b = x a_{μ,ν}/t̃ for t̃ and 0 for I_ν.

    Raises:
        DomainError: f is not guaranteed positive (μ±ν >= -3 for t̃, ν >= -1 for I).
    """
    opts = _options(opts)
    _check_x(x)
    kind = ConditionKind(kind)
    shift = x if x > opts.scaling_threshold else 0.0
    nu = p.nu
    if kind is ConditionKind.BESSEL_I:
        if nu < -1.0:
            raise DomainError(f"condition_number(bessel_i) requires nu >= -1, got nu={nu}")
        f = bessel_i(nu, x, opts).value
        down = x * bessel_i(nu - 1.0, x, opts).value / f - nu
        up = x * bessel_i(nu + 1.0, x, opts).value / f + nu
        return down, up
    if p.mu - nu < -3.0 or p.mu + nu < -3.0:
        raise DomainError(f"condition_number(lommel_t_tilde) requires mu±nu >= -3, got {p}")
    f = _t_tilde_scaled(p, x, opts, shift)
    if f <= 0.0:
        raise DomainError(f"t̃{p}({x}) is not positive")
    down = x * _t_tilde_scaled(p.shifted(-1.0, -1.0), x, opts, shift) / f - nu
    a = coeff_a(p, x)
    a_scaled = a * math.exp(-shift) if shift else a
    up = x * _t_tilde_scaled(p.shifted(1.0, 1.0), x, opts, shift) / f + nu + x * a_scaled / f
    return down, up


def condition_number(
    kind: ConditionKind | str, p: OrderPair, x: float, opts: Optional[EvalOptions] = None
) -> float:
    """
    Condition number C(f) = x f′(x)/f(x) of t̃_{μ,ν} or I_ν.

    Computed from the downward relation and cross-checked against the upward
    one (see condition_number_forms); a disagreement beyond 1e-12 relative is
    logged.

    Args:
        kind: ``lommel_t_tilde`` or ``bessel_i`` (the latter uses only p.nu).
        p: Order pair.
        x: Argument, x > 0.
        opts: Evaluation options.

    Raises:
        DomainError: f is not guaranteed positive (μ±ν >= -3 for t̃, ν >= -1 for I).
    """
    kind = ConditionKind(kind)
    down, up = condition_number_forms(kind, p, x, opts)
    if abs(down - up) > CONDITION_CROSSCHECK_TOL * max(abs(down), abs(up)):
        logger.warning(
            "condition_number_crosscheck_mismatch", kind=kind.value, mu=p.mu, nu=p.nu, x=x,
            downward=down, upward=up,
        )
    return down


def ratio_h(p: OrderPair, x: float, opts: Optional[EvalOptions] = None) -> float:
    """h_{μ,ν}(x) = t̃_{μ,ν}(x)/t̃_{μ-1,ν-1}(x)."""
    opts = _options(opts)
    _check_x(x)
    den = lommel_t_tilde(p.shifted(-1.0, -1.0), x, opts)
    if den.value <= 0.0:
        raise DomainError(f"t̃_(mu-1,nu-1)({x}) is not positive for {p}")
    num = lommel_t_tilde(p, x, opts)
    return num.value / den.value * math.exp(num.log_scale - den.log_scale)


def ratio_r(nu: float, x: float, opts: Optional[EvalOptions] = None) -> float:
    """r_ν(x) = I_ν(x)/I_{ν-1}(x)."""
    opts = _options(opts)
    _check_x(x)
    den = bessel_i(nu - 1.0, x, opts)
    if den.value <= 0.0:
        raise DomainError(f"I_(nu-1)({x}) is not positive for nu={nu}")
    num = bessel_i(nu, x, opts)
    return num.value / den.value * math.exp(num.log_scale - den.log_scale)


def ratio_xy(p: OrderPair, x: float, y: float, opts: Optional[EvalOptions] = None) -> float:
    """t̃_{μ,ν}(x)/t̃_{μ,ν}(y)."""
    opts = _options(opts)
    _check_x(x)
    _check_x(y)
    vx = lommel_t_tilde(p, x, opts)
    vy = lommel_t_tilde(p, y, opts)
    if vy.value == 0.0:
        raise DomainError(f"t̃{p}({y}) vanishes")
    return vx.value / vy.value * math.exp(vx.log_scale - vy.log_scale)
