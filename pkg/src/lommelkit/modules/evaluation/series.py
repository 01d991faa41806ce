"""
Double-precision engine for the series

    S(x) = sum_k (x/2)^(p+2k) / (Γ(k+α) Γ(k+β))

that covers I_ν (α=1, β=ν+1, p=ν), t̃_{μ,ν} (α=(μ-ν+3)/2, β=(μ+ν+3)/2,
p=μ+1) and L_ν (the case μ=ν), plus the Pochhammer series of 1/b_{μ,ν}.

Terms are generated by the ratio q_k = (x/2)²/((k+α)(k+β)). Summation stops
when q_k < 1 and the geometric tail t_k·q_k/(1-q_k) is below rel_tol times
the partial sum. Above the scaling threshold every term carries a factor
e^{-x} and the result is returned with log_scale = x.
"""

import math
from dataclasses import dataclass
from typing import List

from lommelkit.core.config import EvalOptions
from lommelkit.core.errors import NonConvergence
from lommelkit.core.gamma import recip_gamma

# Below this a term is tracked as a logarithm until it becomes representable.
_TINY = 1e-290
_LOG_TINY = math.log(_TINY)
_LOG_HUGE = 709.0


@dataclass(frozen=True)
class SeriesSum:
    value: float
    log_scale: float
    terms_used: int
    tail_bound: float


def first_positive_index(alpha: float, beta: float) -> int:
    """Smallest k >= 0 with k+α > 0 and k+β > 0."""
    k = 0
    for shift in (alpha, beta):
        if shift <= 0.0:
            k = max(k, math.floor(-shift) + 1)
    return k


def _scaled_power(h: float, power: float, shift: float) -> float:
    try:
        value = h**power
        if shift:
            value *= math.exp(-shift)
        if math.isfinite(value):
            return value
    except OverflowError:
        pass
    return math.exp(power * math.log(h) - shift)


def _first_term(h: float, power: float, a: float, b: float, shift: float) -> tuple[float, float]:
    """Return (term, log_term) of (x/2)^power e^{-shift}/(Γ(a)Γ(b)) for a, b > 0."""
    log_term = power * math.log(h) - math.lgamma(a) - math.lgamma(b) - shift
    try:
        term = h**power * recip_gamma(a) * recip_gamma(b)
        if shift:
            term *= math.exp(-shift)
    except OverflowError:
        term = math.inf
    if math.isfinite(term) and term > _TINY:
        return term, log_term
    if log_term > _LOG_HUGE:
        raise NonConvergence(
            f"leading term exp({log_term:.1f}) overflows; lower the scaling threshold", 0, math.inf
        )
    return (math.exp(log_term) if log_term > _LOG_TINY else 0.0), log_term


def sum_positive_tail(
    first: float,
    log_first: float,
    alpha: float,
    beta: float,
    h2: float,
    k_start: int,
    head: List[float],
    opts: EvalOptions,
) -> tuple[float, int, float]:
    """
    Sum t_k for k >= k_start with t_{k+1} = t_k·h2/((k+α)(k+β)), all t_k > 0.

    Args:
        first: t_{k_start}, or 0.0 if it underflows.
        log_first: log t_{k_start}.
        alpha, beta: Ratio parameters with k_start+α > 0 and k_start+β > 0.
        h2: (x/2)².
        k_start: Index of the first positive term.
        head: Terms already computed for k < k_start (any sign).
        opts: Evaluation options.

    Returns:
        (sum, terms used, relative tail bound).

    Raises:
        NonConvergence: max_terms reached before the tail bound was met.
    """
    terms = list(head)
    partial = math.fsum(terms)
    term = first
    log_term = log_first
    used = k_start
    k = k_start
    while True:
        if used >= opts.max_terms:
            tail = abs(term) / abs(partial) if partial else math.inf
            raise NonConvergence(
                f"series did not converge within {opts.max_terms} terms", used, tail
            )
        q = h2 / ((k + alpha) * (k + beta))
        if term == 0.0 and log_term > _LOG_TINY:
            term = math.exp(log_term)
        used += 1
        if term:
            terms.append(term)
            partial += term
            if q < 1.0:
                tail = term * q / (1.0 - q)
                if tail <= opts.rel_tol * abs(partial):
                    total = math.fsum(terms)
                    return total, used, (tail / abs(total) if total else 0.0)
            term *= q
            if not math.isfinite(partial):
                raise NonConvergence(
                    "partial sum overflowed; lower the scaling threshold", used, math.inf
                )
        else:
            if q < 1.0:
                # still below the representable range and decreasing from here on
                total = math.fsum(terms)
                return total, used, 0.0
            log_term += math.log(q)
        k += 1


def gamma_series(power: float, alpha: float, beta: float, x: float, opts: EvalOptions) -> SeriesSum:
    """Evaluate sum_k (x/2)^(power+2k)/(Γ(k+α)Γ(k+β)), scaled above the threshold."""
    h = 0.5 * x
    h2 = h * h
    shift = x if x > opts.scaling_threshold else 0.0
    k0 = first_positive_index(alpha, beta)
    head: List[float] = []
    for k in range(k0):
        ra = recip_gamma(k + alpha)
        rb = recip_gamma(k + beta)
        if ra == 0.0 or rb == 0.0:
            continue
        head.append(_scaled_power(h, power + 2 * k, shift) * ra * rb)
    first, log_first = _first_term(h, power + 2 * k0, k0 + alpha, k0 + beta, shift)
    total, used, tail = sum_positive_tail(first, log_first, alpha, beta, h2, k0, head, opts)
    return SeriesSum(total, shift, used, tail)


def pochhammer_series(alpha: float, beta: float, x: float, opts: EvalOptions) -> SeriesSum:
    """Evaluate sum_k (x/2)^{2k}/((α)_k (β)_k) for α, β > 0, scaled above the threshold."""
    h = 0.5 * x
    shift = x if x > opts.scaling_threshold else 0.0
    first = math.exp(-shift)
    total, used, tail = sum_positive_tail(
        first if first > _TINY else 0.0, -shift, alpha, beta, h * h, 0, [], opts
    )
    return SeriesSum(total, shift, used, tail)
