"""
High-precision value provider for bounds, identities and tables.

A Backend hands out mpmath numbers for t̃, I, a and b so that margins and
residuals are formed without cancellation. With ``oracle_mode`` it sums the
series in extended precision; otherwise it lifts the double-precision
Evaluations (value·e^{log_scale}). Values are cached per instance.
"""

import math
from contextlib import contextmanager
from typing import Callable, Dict, Iterator, Tuple

from mpmath import mp, mpf

from lommelkit.core.config import EvalOptions
from lommelkit.core.types import OrderPair
from lommelkit.modules.evaluation import functions, oracle

_LOG10_E = 1.0 / math.log(10.0)


class Backend:
    """Cached extended-precision values of the functions a bound is built from."""

    def __init__(self, opts: EvalOptions | None = None):
        self.opts = opts if opts is not None else EvalOptions(oracle_mode=True)
        self._cache: Dict[Tuple, mpf] = {}

    @property
    def oracle(self) -> bool:
        return self.opts.oracle_mode

    def dps_for(self, x: float) -> int:
        """Working digits at argument x: the base precision plus the digits e^x spans."""
        return self.opts.oracle_dps + int(x * _LOG10_E) + 5

    @contextmanager
    def precision(self, x: float) -> Iterator[None]:
        with mp.workdps(self.dps_for(x)):
            yield

    def _cached(self, key: Tuple, compute: Callable[[], mpf]) -> mpf:
        value = self._cache.get(key)
        if value is None:
            value = compute()
            self._cache[key] = value
        return value

    def _lift(self, evaluation, x: float) -> mpf:
        with self.precision(x):
            value = mpf(evaluation.value)
            if evaluation.log_scale:
                value *= mp.exp(mpf(evaluation.log_scale))
            return value

    def t(self, mu: float, nu: float, x: float) -> mpf:
        """t̃_{μ,ν}(x)."""
        def compute():
            if self.oracle:
                return oracle.t_tilde(mu, nu, x, self.dps_for(x))
            return self._lift(functions.lommel_t_tilde(OrderPair(mu, nu), x, self.opts), x)

        return self._cached(("t", mu, nu, x), compute)

    def i(self, nu: float, x: float) -> mpf:
        """I_ν(x)."""
        def compute():
            if self.oracle:
                return oracle.bessel_i(nu, x, self.dps_for(x))
            return self._lift(functions.bessel_i(nu, x, self.opts), x)

        return self._cached(("i", nu, x), compute)

    def l(self, nu: float, x: float) -> mpf:
        """L_ν(x) = t̃_{ν,ν}(x)."""
        return self.t(nu, nu, x)

    def a(self, mu: float, nu: float, x: float) -> mpf:
        """a_{μ,ν}(x)."""
        def compute():
            if self.oracle:
                return oracle.coeff_a(mu, nu, x, self.dps_for(x))
            with self.precision(x):
                return mpf(functions.coeff_a(OrderPair(mu, nu), x))

        return self._cached(("a", mu, nu, x), compute)

    def b(self, mu: float, nu: float, x: float) -> mpf:
        """b_{μ,ν}(x); the Pochhammer series inside b_domain, x·a/(2t̃) elsewhere."""
        def compute():
            p = OrderPair(mu, nu)
            if p.b_domain:
                if self.oracle:
                    return oracle.ratio_b(mu, nu, x, self.dps_for(x))
                with self.precision(x):
                    return mpf(functions.ratio_b(p, x, self.opts))
            with self.precision(x):
                return x * self.a(mu, nu, x) / (2 * self.t(mu, nu, x))

        return self._cached(("b", mu, nu, x), compute)

    def dt(self, mu: float, nu: float, x: float) -> mpf:
        """t̃′_{μ,ν}(x) by termwise differentiation of the series."""
        return self._cached(
            ("dt", mu, nu, x), lambda: oracle.t_tilde_derivative(mu, nu, x, self.dps_for(x))
        )

    def di(self, nu: float, x: float) -> mpf:
        """I′_ν(x) by termwise differentiation of the series."""
        return self._cached(("di", nu, x), lambda: oracle.bessel_i_derivative(nu, x, self.dps_for(x)))
