"""
Extended-precision oracle for the gamma-denominator series.

Sums the same series as the double-precision engine in mpmath arithmetic at
`dps` working digits, doubling the number of terms until two successive
partial sums agree to 10^-(dps-10) relative (always tighter than 1e-15).
Everything here returns mpmath numbers; callers convert.
"""

from typing import Optional, Tuple

import mpmath
from mpmath import mp, mpf

from lommelkit.core.errors import NonConvergence
from lommelkit.core.gamma import is_nonpositive_integer
from lommelkit.modules.evaluation.series import first_positive_index

DEFAULT_DPS = 40
_GUARD_DIGITS = 10


def _rgamma(z) -> mpf:
    if is_nonpositive_integer(float(z)):
        return mpf(0)
    return mpmath.rgamma(z)


def _sum(
    power: float,
    alpha: float,
    beta: float,
    x: float,
    dps: int,
    max_terms: int,
    weighted: bool = False,
    pochhammer: bool = False,
) -> Tuple[mpf, int, mpf]:
    """Sum the series at the current precision.

    `weighted` multiplies term k by (power+2k)/x, which differentiates the
    gamma series termwise. `pochhammer` sums (x/2)^{2k}/((α)_k(β)_k) instead.
    """
    xm = mpf(x)
    h = xm / 2
    h2 = h * h
    a = mpf(alpha)
    b = mpf(beta)
    tol = mpf(10) ** (-(dps - _GUARD_DIGITS))

    def weight(k):
        return (power + 2 * k) / xm if weighted else 1

    total = mpf(0)
    if pochhammer:
        k0 = 0
        term = mpf(1)
    else:
        k0 = first_positive_index(alpha, beta)
        for k in range(k0):
            ra, rb = _rgamma(a + k), _rgamma(b + k)
            if ra and rb:
                total += weight(k) * h ** (power + 2 * k) * ra * rb
        term = h ** (power + 2 * k0) * mpmath.rgamma(a + k0) * mpmath.rgamma(b + k0)

    k = k0
    used = k0
    checkpoint = max(16, 2 * k0)
    previous: Optional[mpf] = None
    while True:
        total += weight(k) * term
        used += 1
        q = h2 / ((k + a) * (k + b))
        term *= q
        k += 1
        if used >= checkpoint:
            if previous is not None and q < 1:
                diff = abs(total - previous)
                if diff <= tol * abs(total):
                    return total, used, (diff / abs(total) if total else mpf(0))
            previous = total
            checkpoint *= 2
        if used >= max_terms:
            raise NonConvergence(
                f"oracle series did not settle within {max_terms} terms", used, None
            )


def gamma_series(
    power: float, alpha: float, beta: float, x: float, dps: int = DEFAULT_DPS, max_terms: int = 100_000
) -> mpf:
    with mp.workdps(dps + _GUARD_DIGITS):
        value, _, _ = _sum(power, alpha, beta, x, dps, max_terms)
        return +value


def gamma_series_with_diagnostics(
    power: float, alpha: float, beta: float, x: float, dps: int = DEFAULT_DPS, max_terms: int = 100_000
) -> Tuple[mpf, int, float]:
    with mp.workdps(dps + _GUARD_DIGITS):
        value, used, tail = _sum(power, alpha, beta, x, dps, max_terms)
        return +value, used, float(tail)


def _bessel_order(nu: float) -> float:
    # I_{-n} = I_n for integer n
    return abs(nu) if is_nonpositive_integer(nu) else nu


def bessel_i(nu: float, x: float, dps: int = DEFAULT_DPS) -> mpf:
    nu = _bessel_order(nu)
    return gamma_series(nu, 1.0, nu + 1.0, x, dps)


def bessel_i_derivative(nu: float, x: float, dps: int = DEFAULT_DPS) -> mpf:
    nu = _bessel_order(nu)
    with mp.workdps(dps + _GUARD_DIGITS):
        value, _, _ = _sum(nu, 1.0, nu + 1.0, x, dps, 100_000, weighted=True)
        return +value


def t_tilde(mu: float, nu: float, x: float, dps: int = DEFAULT_DPS) -> mpf:
    return gamma_series(mu + 1.0, 0.5 * (mu - nu + 3.0), 0.5 * (mu + nu + 3.0), x, dps)


def t_tilde_derivative(mu: float, nu: float, x: float, dps: int = DEFAULT_DPS) -> mpf:
    """Termwise derivative of the t̃ series."""
    with mp.workdps(dps + _GUARD_DIGITS):
        value, _, _ = _sum(
            mu + 1.0, 0.5 * (mu - nu + 3.0), 0.5 * (mu + nu + 3.0), x, dps, 100_000, weighted=True
        )
        return +value


def struve_l(nu: float, x: float, dps: int = DEFAULT_DPS) -> mpf:
    return t_tilde(nu, nu, x, dps)


def coeff_a(mu: float, nu: float, x: float, dps: int = DEFAULT_DPS) -> mpf:
    with mp.workdps(dps + _GUARD_DIGITS):
        ra = _rgamma(mpf(mu - nu + 1.0) / 2)
        rb = _rgamma(mpf(mu + nu + 3.0) / 2)
        if not (ra and rb):
            return mpf(0)
        return +((mpf(x) / 2) ** mu * ra * rb)


def ratio_b(mu: float, nu: float, x: float, dps: int = DEFAULT_DPS) -> mpf:
    """b_{μ,ν}(x) from the reciprocal Pochhammer series; requires b_domain."""
    with mp.workdps(dps + _GUARD_DIGITS):
        s, _, _ = _sum(0.0, 0.5 * (mu - nu + 3.0), 0.5 * (mu + nu + 3.0), x, dps, 100_000, pochhammer=True)
        return +(mpf(mu - nu + 1.0) / (2 * s))


def normalization(mu: float, nu: float, dps: int = DEFAULT_DPS) -> Optional[mpf]:
    """2^{μ-1}Γ((μ-ν+1)/2)Γ((μ+ν+1)/2), or None on a gamma pole."""
    ga = 0.5 * (mu - nu + 1.0)
    gb = 0.5 * (mu + nu + 1.0)
    if is_nonpositive_integer(ga) or is_nonpositive_integer(gb):
        return None
    with mp.workdps(dps + _GUARD_DIGITS):
        return +(mpf(2) ** (mpf(mu) - 1) * mpmath.gamma(mpf(ga)) * mpmath.gamma(mpf(gb)))
