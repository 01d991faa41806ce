"""Reciprocal gamma function and pole predicates."""

import math

from scipy import special

# Arguments this close to a nonpositive integer are treated as exact poles.
POLE_TOL = 1e-12


def is_nonpositive_integer(z: float, tol: float = POLE_TOL) -> bool:
    if not math.isfinite(z) or z > 0.5:
        return False
    n = round(z)
    return n <= 0 and abs(z - n) < tol


def _sinpi(z: float) -> float:
    # reduce to [-1, 1] first so sin(pi*r) keeps full relative accuracy
    r = z - 2.0 * round(z / 2.0)
    return math.sin(math.pi * r)


def recip_gamma(z: float) -> float:
    """
    Reciprocal gamma function 1/Γ(z) for real z.

    Exactly zero on (and within POLE_TOL of) the poles 0, -1, -2, ...; uses the
    reflection formula 1/Γ(z) = sin(πz)Γ(1-z)/π for z < 1/2.

    Args:
        z: Real argument.

    Returns:
        1/Γ(z); NaN for NaN or -inf input.
    """
    if math.isnan(z) or z == -math.inf:
        return math.nan
    if is_nonpositive_integer(z):
        return 0.0
    if z >= 0.5:
        return float(special.rgamma(z))
    w = 1.0 - z
    s = _sinpi(z)
    if w > 171.0:
        # |1/Γ(z)| grows like Γ(1-z) and leaves the double range
        try:
            return s * math.exp(math.lgamma(w)) / math.pi
        except OverflowError:
            return math.copysign(math.inf, s)
    return s * math.gamma(w) / math.pi
