"""Closed-form constants attached to the catalog entries."""

import mpmath
from mpmath import mp, mpf

from lommelkit.core.errors import DomainError, NormalizationPole
from lommelkit.core.gamma import is_nonpositive_integer
from lommelkit.core.types import OrderPair

_DPS = 30


def _check_gamma_args(p: OrderPair, *args: float) -> None:
    for arg in args:
        if is_nonpositive_integer(arg):
            raise NormalizationPole(f"gamma argument {arg:g} is a pole for {p}")


def _base(p: OrderPair) -> mpf:
    """((μ+3)²-ν²)^{(μ-ν+1)/2}/(Γ((μ-ν+3)/2)Γ((μ+ν+3)/2))."""
    if p.c <= 0.0:
        raise DomainError(f"(mu+3)^2-nu^2 must be positive, got {p.c:g} for {p}")
    _check_gamma_args(p, p.alpha, p.beta)
    d = mpf(p.mu - p.nu + 1.0)
    return mpf(p.c) ** (d / 2) * mpmath.rgamma(p.alpha) * mpmath.rgamma(p.beta)


def constant_C(p: OrderPair) -> float:
    """C_{μ,ν} = c^{(μ-ν+1)/2}Γ(ν+1)/(2^{μ-ν+1}Γ((μ-ν+3)/2)Γ((μ+ν+3)/2)), c = (μ+3)²-ν²."""
    _check_gamma_args(p, p.nu + 1.0)
    with mp.workdps(_DPS):
        d = mpf(p.mu - p.nu + 1.0)
        return float(_base(p) * mpmath.gamma(p.nu + 1.0) / mpf(2) ** d)


def constant_C_prime(p: OrderPair) -> float:
    """C′_{μ,ν} = c^{(μ-ν+1)/2}(e^{-1}(2ν+1))^{ν+1/2}/(2^{μ+1}Γ((μ-ν+3)/2)Γ((μ+ν+3)/2))."""
    if p.nu < -0.5:
        raise DomainError(f"constant_C_prime requires nu >= -1/2, got {p}")
    with mp.workdps(_DPS):
        e_term = (mpf(2 * p.nu + 1.0) / mp.e) ** (mpf(p.nu) + mpf(1) / 2)
        return float(_base(p) * e_term / mpf(2) ** (p.mu + 1.0))


def g_of_k(k: float) -> float:
    """Large-μ limit of C′_{μ,μ-k}: (k+3)^{(k+1)/2}(e/2)^{k/2}/(√(2π)Γ((k+3)/2))."""
    if k < -0.5:
        raise DomainError(f"g_of_k requires k >= -1/2, got {k}")
    with mp.workdps(_DPS):
        km = mpf(k)
        value = (km + 3) ** ((km + 1) / 2) * (mp.e / 2) ** (km / 2) / (
            mp.sqrt(2 * mp.pi) * mpmath.gamma((km + 3) / 2)
        )
        return float(value)


def near22_constant(nu: float) -> float:
    """Γ(ν+1)√(3(2ν+3))/(√πΓ(ν+3/2)), ν > -1."""
    if nu <= -1.0:
        raise DomainError(f"near22_constant requires nu > -1, got {nu}")
    with mp.workdps(_DPS):
        return float(
            mpmath.gamma(nu + 1.0) * mp.sqrt(3 * (2 * mpf(nu) + 3)) / (mp.sqrt(mp.pi) * mpmath.gamma(nu + 1.5))
        )


def bpstu_constant(nu: float) -> float:
    """2Γ(ν+2)/(√πΓ(ν+3/2)), ν >= -1/2."""
    if nu < -0.5:
        raise DomainError(f"bpstu_constant requires nu >= -1/2, got {nu}")
    with mp.workdps(_DPS):
        return float(2 * mpmath.gamma(nu + 2.0) / (mp.sqrt(mp.pi) * mpmath.gamma(nu + 1.5)))


def ratio_upper_small_x_relerr(p: OrderPair) -> float:
    """x↓0 limit of the relative error of I_ν/I_{ν-1} as an upper bound for h_{μ,ν}: (μ-ν+1)/(2ν)."""
    if p.nu <= 0.0:
        raise DomainError(f"limit requires nu > 0, got {p}")
    return (p.mu - p.nu + 1.0) / (2.0 * p.nu)


def sqrt_upper_small_x_relerr(p: OrderPair) -> float:
    """x↓0 limit of the relative error of the square-root upper bound: (μ-ν+2)/(2ν-1)."""
    if p.nu <= 0.5:
        raise DomainError(f"limit requires nu > 1/2, got {p}")
    return (p.mu - p.nu + 2.0) / (2.0 * p.nu - 1.0)


def exp_lower_small_x_relerr(p: OrderPair) -> float:
    """x↓0 limit of the relative error of the exponential lower bound: 1 - (√(2π)C′_{μ,ν})^{-1}."""
    with mp.workdps(_DPS):
        return float(1 - 1 / (mp.sqrt(2 * mp.pi) * constant_C_prime(p)))
