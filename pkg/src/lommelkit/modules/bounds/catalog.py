"""
Catalog of inequalities for modified Lommel, Bessel and Struve functions.

Each entry names the bounded quantity, its lower and/or upper expression and a
validity region per side. Expressions are evaluated from a Backend in
extended precision so margins (target - lower, upper - target) keep their
sign even when the bound is tight to many digits.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

import mpmath
from mpmath import mp, mpf

from lommelkit.core.config import EvalOptions
from lommelkit.core.errors import DomainError, UnknownBoundId
from lommelkit.core.gamma import is_nonpositive_integer
from lommelkit.core.logging import get_logger
from lommelkit.core.types import OrderPair
from lommelkit.modules.bounds.domains import (
    ABS_NU_LT_MU_PLUS_3,
    B_DOMAIN,
    C_GE_6,
    C_LE_6,
    NU_LT_MU_PLUS_1,
    DomainRegion,
    DomainVerdict,
    bracket,
    ge,
    gt,
    mu_ge,
    mu_gt,
    mu_le,
    nu_ge,
    nu_gt,
    region,
)
from lommelkit.modules.evaluation.backend import Backend

logger = get_logger(__name__)

GUARD_FACTOR = 10.0
EQUALITY_TOL = 1e-12


class Target(str, Enum):
    T = "t_tilde"
    L = "struve_l"
    B = "b"
    H = "h"
    R = "r"
    C = "condition_number"
    XY = "ratio_xy"
    CROSS = "cross_product"
    W = "t_tilde_over_power"
    E = "t_tilde_exp_normalized"


class Side(str, Enum):
    LOWER = "lower"
    UPPER = "upper"
    TWO_SIDED = "two_sided"


class BoundContext:
    """Evaluation site (μ, ν, x[, y]) with shorthand accessors into a Backend."""

    def __init__(self, p: OrderPair, x: float, y: Optional[float], backend: Backend):
        self.p = p
        self.mu = p.mu
        self.nu = p.nu
        self.x_float = x
        self.y_float = y
        self.backend = backend
        self.X = mpf(x)
        self.Y = mpf(y) if y is not None else None

    def t(self, dmu: float = 0.0, dnu: float = 0.0, at: Optional[float] = None) -> mpf:
        return self.backend.t(self.mu + dmu, self.nu + dnu, self.x_float if at is None else at)

    def i(self, dnu: float = 0.0, at: Optional[float] = None) -> mpf:
        return self.backend.i(self.nu + dnu, self.x_float if at is None else at)

    def a(self, dmu: float = 0.0, dnu: float = 0.0) -> mpf:
        return self.backend.a(self.mu + dmu, self.nu + dnu, self.x_float)

    def b(self) -> mpf:
        return self.backend.b(self.mu, self.nu, self.x_float)

    @property
    def c(self) -> mpf:
        return (mpf(self.mu) + 3) ** 2 - mpf(self.nu) ** 2

    @property
    def d(self) -> mpf:
        return mpf(self.mu) - mpf(self.nu) + 1

    def rg(self) -> mpf:
        """1/(Γ((μ-ν+3)/2)Γ((μ+ν+3)/2))."""
        out = mpf(1)
        for arg in (self.p.alpha, self.p.beta):
            if is_nonpositive_integer(arg):
                return mpf(0)
            out *= mpmath.rgamma(mpf(arg))
        return out

    def sq(self, shift: float, u: Optional[mpf] = None) -> mpf:
        """√((ν+shift)² + u²)."""
        u = self.X if u is None else u
        return mp.sqrt((mpf(self.nu) + shift) ** 2 + u * u)

    def h(self) -> mpf:
        return self.t() / self.t(-1.0, -1.0)

    def r(self) -> mpf:
        return self.i() / self.i(-1.0)

    def cross(self) -> mpf:
        return self.i() * self.t(-1.0, -1.0) - self.i(-1.0) * self.t()

    def cross_scale(self) -> mpf:
        return abs(self.i() * self.t(-1.0, -1.0))

    def cond_t(self) -> mpf:
        return self.X * self.t(-1.0, -1.0) / self.t() - self.nu

    def cond_i(self) -> mpf:
        return self.X * self.i(-1.0) / self.i() - self.nu

    def xy(self) -> mpf:
        return self.t() / self.t(at=self.y_float)


Expr = Callable[[BoundContext], mpf]


@dataclass(frozen=True)
class Equality:
    description: str
    predicate: Callable[[OrderPair], bool] = field(repr=False)
    sides: Tuple[str, ...] = ("lower", "upper")


@dataclass(frozen=True)
class BoundCatalogEntry:
    """One inequality of the catalog."""

    id: str
    target: Target
    side: Side
    formula: str
    anchor: str
    target_fn: Expr = field(repr=False, compare=False)
    lower_fn: Optional[Expr] = field(default=None, repr=False, compare=False)
    upper_fn: Optional[Expr] = field(default=None, repr=False, compare=False)
    lower_region: Optional[DomainRegion] = None
    upper_region: Optional[DomainRegion] = None
    equality: Optional[Equality] = None
    needs_y: bool = False
    order_only: bool = False
    strict: bool = True
    cross: bool = False

    @property
    def region(self) -> DomainRegion:
        regions = [r for r in (self.lower_region, self.upper_region) if r is not None]
        out = regions[0]
        for extra in regions[1:]:
            out = out | extra
        return out

    def site(self, p: OrderPair) -> OrderPair:
        """Order pair the entry is evaluated at (μ = ν for Bessel/Struve entries)."""
        return OrderPair(p.nu, p.nu) if self.order_only else p

    def manifest(self) -> Dict[str, object]:
        return {
            "id": self.id,
            "target": self.target.value,
            "side": self.side.value,
            "formula": self.formula,
            "lower_region": self.lower_region.description if self.lower_region else None,
            "upper_region": self.upper_region.description if self.upper_region else None,
            "equality": self.equality.description if self.equality else None,
            "strict": self.strict,
            "needs_y": self.needs_y,
            "order_only": self.order_only,
            "anchor": self.anchor,
        }


@dataclass(frozen=True)
class BoundEvaluation:
    """Target, bounds and signed margins of one entry at one site.

    All real values are reported divided by e^{log_scale}; log_scale is 0
    unless the target exceeds the double range.
    """

    entry_id: str
    mu: float
    nu: float
    x: float
    y: Optional[float]
    target_value: float
    lower: Optional[float]
    upper: Optional[float]
    margin_lower: Optional[float]
    margin_upper: Optional[float]
    lower_relerr: Optional[float]
    upper_relerr: Optional[float]
    log_scale: float
    domain_ok: bool
    lower_ok: bool
    upper_ok: bool
    equality_hit: bool
    near_boundary: bool
    guard: float
    domain_verdict: str
    violations: Tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return not self.violations


def _close(a: float, b: float) -> bool:
    return abs(a - b) < EQUALITY_TOL


def _at(mu: float, nu: float) -> Callable[[OrderPair], bool]:
    return lambda p: _close(p.mu, mu) and _close(p.nu, nu)


def _mu_nu_minus_one(p: OrderPair) -> bool:
    return _close(p.mu - p.nu, -1.0)


# Common regions.
_XY_UPPER_REGION = region(mu_ge(-0.5, "-1/2"), nu_ge(-1.0, "-1"), NU_LT_MU_PLUS_1, C_GE_6)
_R_M1_0 = bracket(-1.0, "-1", 0.0, "0")
_R_M05_05 = bracket(-0.5, "-1/2", 0.5, "1/2")
_R_M15_M05 = bracket(-1.5, "-3/2", -0.5, "-1/2")
_R_M2_M1 = bracket(-2.0, "-2", -1.0, "-1")


# Expression helpers.
def _sinh_bound(c: BoundContext) -> mpf:
    return c.X**c.mu * mp.sinh(c.X) * c.rg() / mpf(2) ** (c.mu + 1)


def _csch_bound(c: BoundContext) -> mpf:
    return c.d / 2 * c.X * mp.csch(c.X)


def _ratio_lower(c: BoundContext) -> mpf:
    return 1 / (c.i(-1.0) / c.i() + 2 * c.b() / c.X)


def _tanh_lower(c: BoundContext, extra: mpf) -> mpf:
    th = mp.tanh(c.X)
    return c.X * th / (c.X + (2 * mpf(c.nu) - 1 + extra) * th)


def _sqrt_lower(c: BoundContext, extra: mpf) -> mpf:
    return c.X / (mpf(c.nu) - mpf(1) / 2 + extra + c.sq(0.5))


def _sqrt_upper(c: BoundContext) -> mpf:
    return c.X / (mpf(c.nu) - mpf(1) / 2 + c.sq(-0.5))


def _c_ratio(c: BoundContext) -> mpf:
    """((c+y²)/(c+x²))^{(μ-ν+1)/2}."""
    return ((c.c + c.Y**2) / (c.c + c.X**2)) ** (c.d / 2)


def _tanh_half_ratio(c: BoundContext) -> mpf:
    return (mp.tanh(c.X / 2) / mp.tanh(c.Y / 2)) ** c.d


def _xy_sqrt_lower(c: BoundContext) -> mpf:
    b1 = mpf(c.nu) + mpf(1) / 2
    sx, sy = c.sq(0.5, c.X), c.sq(0.5, c.Y)
    return (
        mp.exp(sx - sy)
        * (c.X / c.Y) ** (c.mu + 1)
        * _c_ratio(c)
        * ((b1 + sy) / (b1 + sx)) ** b1
    )


def _xy_sqrt_upper(c: BoundContext) -> mpf:
    a2 = mpf(c.mu) + mpf(3) / 2
    sx, sy = c.sq(1.5, c.X), c.sq(1.5, c.Y)
    return (
        mp.exp(sx - sy)
        * _tanh_half_ratio(c)
        * (c.X / c.Y) ** c.nu
        * ((a2 + sy) / (a2 + sx)) ** a2
    )


def _w_target(c: BoundContext) -> mpf:
    return ((c.c + c.X**2) / c.X**2) ** (c.d / 2) * c.t()


def _constant_c(c: BoundContext) -> mpf:
    return c.c ** (c.d / 2) * mpmath.gamma(mpf(c.nu) + 1) / mpf(2) ** c.d * c.rg()


def _e_target(c: BoundContext) -> mpf:
    b1 = mpf(c.nu) + mpf(1) / 2
    s1 = c.sq(0.5)
    return (c.c + c.X**2) ** (c.d / 2) * (b1 + s1) ** b1 * c.t() / (c.X ** (c.mu + 1) * mp.exp(s1))


def _constant_c_prime(c: BoundContext) -> mpf:
    b1 = mpf(c.nu) + mpf(1) / 2
    return c.c ** (c.d / 2) * (2 * b1 / mp.e) ** b1 / mpf(2) ** (c.mu + 1) * c.rg()


def _cosh_func_lower(c: BoundContext) -> mpf:
    return (
        c.X**c.nu
        * mp.tanh(c.X / 2) ** c.d
        * mp.cosh(c.X) ** (1 / (mpf(c.mu) + c.nu + 3))
        * c.rg()
        / mpf(2) ** c.nu
    )


def _cosh_func_upper(c: BoundContext) -> mpf:
    return (
        c.X ** (c.mu + 1)
        * (c.c / (c.c + c.X**2)) ** (c.d / 2)
        * mp.cosh(c.X)
        * c.rg()
        / mpf(2) ** (c.mu + 1)
    )


def _near22_upper(c: BoundContext) -> mpf:
    k = 3 * (2 * mpf(c.nu) + 3)
    const = mpmath.gamma(mpf(c.nu) + 1) * mp.sqrt(k) / (mp.sqrt(mp.pi) * mpmath.gamma(mpf(c.nu) + 1.5))
    return const * c.X * c.i() / mp.sqrt(c.X**2 + k)


def _bpstu_upper(c: BoundContext) -> mpf:
    const = 2 * mpmath.gamma(mpf(c.nu) + 2) / (mp.sqrt(mp.pi) * mpmath.gamma(mpf(c.nu) + 1.5))
    return const * c.i(1.0)


def _llowerr(c: BoundContext) -> mpf:
    b1 = mpf(c.nu) + mpf(1) / 2
    s1 = c.sq(0.5)
    return (
        c.X ** (c.nu + 1)
        * mp.exp(s1)
        / (mp.sqrt(2 * mp.pi) * mp.sqrt(3 * (2 * mpf(c.nu) + 3) + c.X**2) * (b1 + s1) ** b1)
    )


def _alt_exp_lower(c: BoundContext) -> mpf:
    a2 = mpf(c.mu) + mpf(3) / 2
    b2 = mpf(c.nu) + mpf(3) / 2
    s2 = c.sq(1.5)
    return (
        mp.exp(s2 - b2)
        * c.X**c.nu
        * mp.tanh(c.X / 2) ** c.d
        * ((mpf(c.mu) + c.nu + 3) / (a2 + s2)) ** a2
        * c.rg()
        / mpf(2) ** c.nu
    )


def _complement_func_lower(c: BoundContext) -> mpf:
    return (
        c.X ** (c.mu + 1)
        * mp.cosh(c.X) ** (1 / (2 * (mpf(c.nu) + 1)))
        / (mpf(2) ** c.nu * mpmath.gamma(mpf(c.nu) + 1) * (c.c + c.X**2) ** (c.d / 2))
    )


def _build_catalog() -> List[BoundCatalogEntry]:
    half_equality = Equality("mu = nu = -1/2", _at(-0.5, -0.5))
    ratio_equality = Equality(
        "mu - nu = -1 (nu >= 0)", lambda p: _mu_nu_minus_one(p) and p.nu >= 0.0
    )
    return [
        BoundCatalogEntry(
            id="SINH_UB", target=Target.T, side=Side.UPPER,
            formula="t~ <= x^mu sinh(x)/(2^(mu+1) G((mu-nu+3)/2) G((mu+nu+3)/2))",
            anchor="sinh inequality; equality if and only if mu = nu = -1/2",
            target_fn=lambda c: c.t(), upper_fn=_sinh_bound,
            upper_region=region(mu_ge(-0.5, "-1/2"), C_GE_6),
            equality=half_equality, strict=False,
        ),
        BoundCatalogEntry(
            id="SINH_LB", target=Target.T, side=Side.LOWER,
            formula="t~ >= x^mu sinh(x)/(2^(mu+1) G((mu-nu+3)/2) G((mu+nu+3)/2))",
            anchor="sinh inequality, reversed case",
            target_fn=lambda c: c.t(), lower_fn=_sinh_bound,
            lower_region=region(mu_gt(-3.0, "-3"), mu_le(-0.5, "-1/2"), C_LE_6, ABS_NU_LT_MU_PLUS_3),
            equality=half_equality, strict=False,
        ),
        BoundCatalogEntry(
            id="B_UB_CONST", target=Target.B, side=Side.UPPER,
            formula="b < (mu-nu+1)/2",
            anchor="b is a decreasing function of x",
            target_fn=lambda c: c.b(), upper_fn=lambda c: c.d / 2,
            upper_region=B_DOMAIN,
        ),
        BoundCatalogEntry(
            id="B_UB_REFINED", target=Target.B, side=Side.UPPER,
            formula="b < (mu-nu+1)/2 (1 + x^2/((mu+3)^2-nu^2))^-1",
            anchor="refined constant bound on b",
            target_fn=lambda c: c.b(), upper_fn=lambda c: c.d / 2 / (1 + c.X**2 / c.c),
            upper_region=B_DOMAIN,
        ),
        BoundCatalogEntry(
            id="B_LB_CSCH", target=Target.B, side=Side.LOWER,
            formula="b >= (mu-nu+1)/2 x csch(x)",
            anchor="csch bound on b",
            target_fn=lambda c: c.b(), lower_fn=_csch_bound,
            lower_region=B_DOMAIN & region(mu_ge(-0.5, "-1/2"), C_GE_6),
            equality=half_equality, strict=False,
        ),
        BoundCatalogEntry(
            id="B_UB_CSCH", target=Target.B, side=Side.UPPER,
            formula="b <= (mu-nu+1)/2 x csch(x)",
            anchor="csch bound on b, reversed case",
            target_fn=lambda c: c.b(), upper_fn=_csch_bound,
            upper_region=B_DOMAIN & region(mu_le(-0.5, "-1/2"), C_LE_6),
            equality=half_equality, strict=False,
        ),
        BoundCatalogEntry(
            id="CROSS_POS", target=Target.CROSS, side=Side.LOWER,
            formula="I_nu t~_(mu-1,nu-1) - I_(nu-1) t~ > 0",
            anchor="positive cross product",
            target_fn=lambda c: c.cross(), lower_fn=lambda c: mpf(0),
            lower_region=region(
                mu_gt(-1.0, "-1"), nu_ge(-1.0, "-1"),
                gt("|nu| < mu+1", lambda mu, nu: mu + 1.0 - abs(nu)),
            ) | region(
                mu_gt(-1.0, "-1"), nu_gt(-1.0, "-1"),
                ge("-mu-1 <= nu", lambda mu, nu: nu + mu + 1.0), NU_LT_MU_PLUS_1,
            ),
            equality=Equality("mu - nu = -1 or (mu, nu) = (0, -1)",
                              lambda p: _mu_nu_minus_one(p) or _at(0.0, -1.0)(p)),
            cross=True,
        ),
        BoundCatalogEntry(
            id="CROSS_UB_A", target=Target.CROSS, side=Side.UPPER,
            formula="I_nu t~_(mu-1,nu-1) - I_(nu-1) t~ < a_(mu,nu) I_nu",
            anchor="cross product upper bound with a_(mu,nu)",
            target_fn=lambda c: c.cross(), upper_fn=lambda c: c.a() * c.i(),
            upper_region=region(
                mu_gt(-2.0, "-2"), nu_ge(-2.0, "-2"),
                gt("|nu+1| < mu+2", lambda mu, nu: mu + 2.0 - abs(nu + 1.0)),
            ) | region(
                mu_gt(-2.0, "-2"), nu_gt(-2.0, "-2"),
                ge("-mu-2 <= nu+1", lambda mu, nu: nu + mu + 3.0),
                gt("nu+1 < mu+2", lambda mu, nu: mu + 1.0 - nu),
            ),
            equality=Equality("mu - nu = -1 or (mu, nu) = (-1, -2)",
                              lambda p: _mu_nu_minus_one(p) or _at(-1.0, -2.0)(p)),
            cross=True,
        ),
        BoundCatalogEntry(
            id="CROSS_UB_B", target=Target.CROSS, side=Side.UPPER,
            formula="I_nu t~_(mu-1,nu-1) - I_(nu-1) t~ < a_(mu-1,nu-1) I_(nu-1)",
            anchor="cross product upper bound with a_(mu-1,nu-1)",
            target_fn=lambda c: c.cross(), upper_fn=lambda c: c.a(-1.0, -1.0) * c.i(-1.0),
            upper_region=region(
                mu_gt(0.0, "0"), nu_ge(0.0, "0"),
                gt("|nu-1| < mu", lambda mu, nu: mu - abs(nu - 1.0)),
            ) | region(
                mu_gt(0.0, "0"), nu_gt(0.0, "0"),
                ge("-mu <= nu-1", lambda mu, nu: nu - 1.0 + mu),
                gt("nu-1 < mu", lambda mu, nu: mu - nu + 1.0),
            ),
            equality=Equality("mu - nu = -1 or (mu, nu) = (1, 0)",
                              lambda p: _mu_nu_minus_one(p) or _at(1.0, 0.0)(p)),
            cross=True,
        ),
        BoundCatalogEntry(
            id="RATIO_BRACKET", target=Target.H, side=Side.TWO_SIDED,
            formula="(I_(nu-1)/I_nu + 2b/x)^-1 < h < I_nu/I_(nu-1)",
            anchor="lower and upper bounds hold",
            target_fn=lambda c: c.h(), lower_fn=_ratio_lower, upper_fn=lambda c: c.r(),
            lower_region=_R_M1_0, upper_region=_R_M1_0,
            equality=ratio_equality,
        ),
        BoundCatalogEntry(
            id="STRUVE_CROSS_1", target=Target.CROSS, side=Side.LOWER,
            formula="I_nu L_(nu-1) - I_(nu-1) L_nu > 0",
            anchor="Struve cross product, positivity",
            target_fn=lambda c: c.cross(), lower_fn=lambda c: mpf(0),
            lower_region=region(nu_ge(-0.5, "-1/2")), order_only=True, cross=True,
        ),
        BoundCatalogEntry(
            id="STRUVE_CROSS_2", target=Target.CROSS, side=Side.UPPER,
            formula="I_nu L_(nu-1) - I_(nu-1) L_nu < a_nu I_nu",
            anchor="Struve cross product, upper bound with a_nu",
            target_fn=lambda c: c.cross(), upper_fn=lambda c: c.a() * c.i(),
            upper_region=region(nu_ge(-1.5, "-3/2")), order_only=True, cross=True,
        ),
        BoundCatalogEntry(
            id="STRUVE_CROSS_3", target=Target.CROSS, side=Side.UPPER,
            formula="I_nu L_(nu-1) - I_(nu-1) L_nu < a_(nu-1) I_(nu-1)",
            anchor="Struve cross product, upper bound with a_(nu-1)",
            target_fn=lambda c: c.cross(), upper_fn=lambda c: c.a(-1.0, -1.0) * c.i(-1.0),
            upper_region=region(nu_ge(0.5, "1/2")), order_only=True, cross=True,
        ),
        BoundCatalogEntry(
            id="STRUVE_BRACKET", target=Target.H, side=Side.TWO_SIDED,
            formula="(I_(nu-1)/I_nu + 2b_nu/x)^-1 < L_nu/L_(nu-1) < I_nu/I_(nu-1)",
            anchor="Struve ratio bracket",
            target_fn=lambda c: c.h(), lower_fn=_ratio_lower, upper_fn=lambda c: c.r(),
            lower_region=region(nu_ge(0.0, "0")), upper_region=region(nu_ge(0.0, "0")),
            order_only=True,
        ),
        BoundCatalogEntry(
            id="RATIO_TANH", target=Target.H, side=Side.TWO_SIDED,
            formula="x tanh x/(x + (2nu-1+2b) tanh x) < h < tanh x",
            anchor="tanh bracket for h",
            target_fn=lambda c: c.h(), lower_fn=lambda c: _tanh_lower(c, 2 * c.b()),
            upper_fn=lambda c: mp.tanh(c.X),
            lower_region=_R_M05_05, upper_region=_R_M05_05,
        ),
        BoundCatalogEntry(
            id="RATIO_SQRT", target=Target.H, side=Side.TWO_SIDED,
            formula="x/(nu-1/2+2b+sqrt((nu+1/2)^2+x^2)) < h < x/(nu-1/2+sqrt((nu-1/2)^2+x^2))",
            anchor="square-root bracket for h",
            target_fn=lambda c: c.h(), lower_fn=lambda c: _sqrt_lower(c, 2 * c.b()),
            upper_fn=_sqrt_upper,
            lower_region=_R_M1_0, upper_region=_R_M05_05,
        ),
        BoundCatalogEntry(
            id="RATIO_SIMPLE_TANH", target=Target.H, side=Side.LOWER,
            formula="h > tanh(x)/(mu+nu+1)",
            anchor="simpler tanh lower bound",
            target_fn=lambda c: c.h(), lower_fn=lambda c: mp.tanh(c.X) / (mpf(c.mu) + c.nu + 1),
            lower_region=_R_M05_05,
        ),
        BoundCatalogEntry(
            id="RATIO_SIMPLE_SQRT", target=Target.H, side=Side.LOWER,
            formula="h > x/(mu+1/2+sqrt((nu+1/2)^2+x^2))",
            anchor="simpler square-root lower bound",
            target_fn=lambda c: c.h(),
            lower_fn=lambda c: c.X / (mpf(c.mu) + mpf(1) / 2 + c.sq(0.5)),
            lower_region=_R_M1_0,
        ),
        BoundCatalogEntry(
            id="COND_BESSEL", target=Target.C, side=Side.TWO_SIDED,
            formula="C(I_nu) < C(t~) < C(I_nu) + 2b",
            anchor="condition number bracket via I_nu",
            target_fn=lambda c: c.cond_t(), lower_fn=lambda c: c.cond_i(),
            upper_fn=lambda c: c.cond_i() + 2 * c.b(),
            lower_region=_R_M1_0, upper_region=_R_M2_M1,
        ),
        BoundCatalogEntry(
            id="COND_SQRT", target=Target.C, side=Side.TWO_SIDED,
            formula="sqrt((nu-1/2)^2+x^2) - 1/2 < C(t~) < sqrt((nu+1/2)^2+x^2) + 2b - 1/2",
            anchor="square-root condition number bracket",
            target_fn=lambda c: c.cond_t(),
            lower_fn=lambda c: c.sq(-0.5) - mpf(1) / 2,
            upper_fn=lambda c: c.sq(0.5) + 2 * c.b() - mpf(1) / 2,
            lower_region=_R_M05_05, upper_region=_R_M15_M05,
        ),
        BoundCatalogEntry(
            id="COND_TANH", target=Target.C, side=Side.TWO_SIDED,
            formula="x coth x - nu < C(t~) < x tanh x + nu + 2b",
            anchor="hyperbolic condition number bracket",
            target_fn=lambda c: c.cond_t(),
            lower_fn=lambda c: c.X * mp.coth(c.X) - c.nu,
            upper_fn=lambda c: c.X * mp.tanh(c.X) + c.nu + 2 * c.b(),
            lower_region=_R_M05_05, upper_region=_R_M15_M05,
        ),
        BoundCatalogEntry(
            id="XY_BESSEL", target=Target.XY, side=Side.TWO_SIDED,
            formula="(x/y)^(mu-nu+1) ((c+y^2)/(c+x^2))^((mu-nu+1)/2) I_nu(x)/I_nu(y) < t~(x)/t~(y) < I_nu(x)/I_nu(y)",
            anchor="ratio in x via I_nu",
            target_fn=lambda c: c.xy(),
            lower_fn=lambda c: (c.X / c.Y) ** c.d * _c_ratio(c) * c.i() / c.i(at=c.y_float),
            upper_fn=lambda c: c.i() / c.i(at=c.y_float),
            lower_region=_R_M2_M1, upper_region=_R_M1_0, needs_y=True,
        ),
        BoundCatalogEntry(
            id="XY_SQRT", target=Target.XY, side=Side.TWO_SIDED,
            formula="exponential-square-root bracket for t~(x)/t~(y)",
            anchor="ratio in x, square-root form",
            target_fn=lambda c: c.xy(), lower_fn=_xy_sqrt_lower, upper_fn=_xy_sqrt_upper,
            lower_region=_R_M15_M05, upper_region=_XY_UPPER_REGION, needs_y=True,
        ),
        BoundCatalogEntry(
            id="XY_COSH", target=Target.XY, side=Side.TWO_SIDED,
            formula="((c+y^2)/(c+x^2))^((mu-nu+1)/2) (x/y)^(mu+1) cosh x/cosh y < t~(x)/t~(y) "
                    "< (x/y)^nu (tanh(x/2)/tanh(y/2))^(mu-nu+1) (cosh x/cosh y)^(1/(mu+nu+3))",
            anchor="ratio in x, cosh form",
            target_fn=lambda c: c.xy(),
            lower_fn=lambda c: _c_ratio(c) * (c.X / c.Y) ** (c.mu + 1) * mp.cosh(c.X) / mp.cosh(c.Y),
            upper_fn=lambda c: (c.X / c.Y) ** c.nu * _tanh_half_ratio(c)
            * (mp.cosh(c.X) / mp.cosh(c.Y)) ** (1 / (mpf(c.mu) + c.nu + 3)),
            lower_region=_R_M15_M05, upper_region=_XY_UPPER_REGION, needs_y=True,
        ),
        BoundCatalogEntry(
            id="FUNC_I_BRACKET", target=Target.W, side=Side.TWO_SIDED,
            formula="I_nu < (x^2/(c+x^2))^(-(mu-nu+1)/2) t~ < C_(mu,nu) I_nu",
            anchor="both the lower and upper bounds hold",
            target_fn=_w_target, lower_fn=lambda c: c.i(),
            upper_fn=lambda c: _constant_c(c) * c.i(),
            lower_region=region(mu_gt(-2.0, "-2"), nu_gt(-1.0, "-1"), NU_LT_MU_PLUS_1),
            upper_region=region(mu_gt(-2.0, "-2"), nu_gt(-1.0, "-1"), NU_LT_MU_PLUS_1),
        ),
        BoundCatalogEntry(
            id="FUNC_I_UB", target=Target.T, side=Side.UPPER,
            formula="t~ < I_nu",
            anchor="t~ below I_nu",
            target_fn=lambda c: c.t(), upper_fn=lambda c: c.i(),
            upper_region=_R_M1_0,
        ),
        BoundCatalogEntry(
            id="FUNC_EXP_BRACKET", target=Target.E, side=Side.TWO_SIDED,
            formula="1/sqrt(2 pi) < (c+x^2)^((mu-nu+1)/2) (nu+1/2+S)^(nu+1/2) t~/(x^(mu+1) e^S) < C'_(mu,nu)",
            anchor="exponential normalization bracket",
            target_fn=_e_target, lower_fn=lambda c: 1 / mp.sqrt(2 * mp.pi),
            upper_fn=_constant_c_prime,
            lower_region=_R_M15_M05, upper_region=_R_M15_M05,
        ),
        BoundCatalogEntry(
            id="FUNC_COSH_BRACKET", target=Target.T, side=Side.TWO_SIDED,
            formula="x^nu tanh^(mu-nu+1)(x/2) cosh^(1/(mu+nu+3))(x)/(2^nu GG) < t~ "
                    "< x^(mu+1) (c/(c+x^2))^((mu-nu+1)/2) cosh(x)/(2^(mu+1) GG)",
            anchor="cosh bracket for t~",
            target_fn=lambda c: c.t(), lower_fn=_cosh_func_lower, upper_fn=_cosh_func_upper,
            lower_region=_XY_UPPER_REGION, upper_region=_R_M15_M05,
        ),
        BoundCatalogEntry(
            id="NEAR22", target=Target.L, side=Side.UPPER,
            formula="L_nu < G(nu+1) sqrt(3(2nu+3))/(sqrt(pi) G(nu+3/2)) x I_nu/sqrt(x^2+3(2nu+3))",
            anchor="Struve upper bound via I_nu",
            target_fn=lambda c: c.t(), upper_fn=_near22_upper,
            upper_region=region(nu_gt(-1.0, "-1")), order_only=True,
        ),
        BoundCatalogEntry(
            id="BPSTU", target=Target.L, side=Side.UPPER,
            formula="L_nu <= 2 G(nu+2)/(sqrt(pi) G(nu+3/2)) I_(nu+1)",
            anchor="Struve upper bound via I_(nu+1); equality if and only if nu = -1/2",
            target_fn=lambda c: c.t(), upper_fn=_bpstu_upper,
            upper_region=region(nu_ge(-0.5, "-1/2")), order_only=True,
            equality=Equality("nu = -1/2", lambda p: _close(p.nu, -0.5)), strict=False,
        ),
        BoundCatalogEntry(
            id="LLOWERR", target=Target.L, side=Side.LOWER,
            formula="L_nu > (2 pi)^(-1/2) x^(nu+1) e^S/(sqrt(3(2nu+3)+x^2) (nu+1/2+S)^(nu+1/2))",
            anchor="exponential lower bound for L_nu",
            target_fn=lambda c: c.t(), lower_fn=_llowerr,
            lower_region=region(nu_ge(-0.5, "-1/2")), order_only=True,
        ),
        BoundCatalogEntry(
            id="ALT_EXP_LB", target=Target.T, side=Side.LOWER,
            formula="t~ > e^(S-nu-3/2) x^nu tanh^(mu-nu+1)(x/2) ((mu+nu+3)/(mu+3/2+S))^(mu+3/2)/(2^nu GG)",
            anchor="alternative exponential lower bound",
            target_fn=lambda c: c.t(), lower_fn=_alt_exp_lower,
            lower_region=_XY_UPPER_REGION,
        ),
        BoundCatalogEntry(
            id="COMPLEMENT_COSH_XY", target=Target.XY, side=Side.UPPER,
            formula="t~(x)/t~(y) < (x/y)^nu (cosh x/cosh y)^(1/(2(nu+1)))",
            anchor="complementary cosh bound for the ratio in x",
            target_fn=lambda c: c.xy(),
            upper_fn=lambda c: (c.X / c.Y) ** c.nu * (mp.cosh(c.X) / mp.cosh(c.Y)) ** (1 / (2 * (mpf(c.nu) + 1))),
            upper_region=bracket(-1.0, "-1", 0.5, "1/2"), needs_y=True,
        ),
        BoundCatalogEntry(
            id="COMPLEMENT_COSH_FUNC", target=Target.T, side=Side.LOWER,
            formula="t~ > x^(mu+1) cosh^(1/(2(nu+1)))(x)/(2^nu G(nu+1) (c+x^2)^((mu-nu+1)/2))",
            anchor="complementary cosh lower bound for t~",
            target_fn=lambda c: c.t(), lower_fn=_complement_func_lower,
            lower_region=bracket(-2.0, "-2", -0.5, "-1/2"),
        ),
        BoundCatalogEntry(
            id="AUX_TANHB", target=Target.R, side=Side.TWO_SIDED,
            formula="x tanh x/(x + (2nu-1) tanh x) <= I_nu/I_(nu-1) <= tanh x",
            anchor="Bessel ratio tanh bracket; equality at nu = 1/2",
            target_fn=lambda c: c.r(), lower_fn=lambda c: _tanh_lower(c, mpf(0)),
            upper_fn=lambda c: mp.tanh(c.X),
            lower_region=region(nu_ge(0.5, "1/2")), upper_region=region(nu_ge(0.5, "1/2")),
            equality=Equality("nu = 1/2", lambda p: _close(p.nu, 0.5)),
            order_only=True, strict=False,
        ),
        BoundCatalogEntry(
            id="AUX_SQRTBB", target=Target.R, side=Side.TWO_SIDED,
            formula="x/(nu-1/2+sqrt((nu+1/2)^2+x^2)) < I_nu/I_(nu-1) < x/(nu-1/2+sqrt((nu-1/2)^2+x^2))",
            anchor="Bessel ratio square-root bracket",
            target_fn=lambda c: c.r(), lower_fn=lambda c: _sqrt_lower(c, mpf(0)),
            upper_fn=_sqrt_upper,
            lower_region=region(nu_ge(0.0, "0")), upper_region=region(nu_ge(0.5, "1/2")),
            order_only=True,
        ),
    ]


CATALOG: Dict[str, BoundCatalogEntry] = {entry.id: entry for entry in _build_catalog()}


def get_entry(entry_id: str) -> BoundCatalogEntry:
    try:
        return CATALOG[entry_id]
    except KeyError:
        raise UnknownBoundId(f"unknown bound id {entry_id!r}") from None


def catalog_ids() -> List[str]:
    return list(CATALOG)


def catalog_manifest() -> List[Dict[str, object]]:
    """One JSON-serialisable record per catalog entry."""
    return [entry.manifest() for entry in CATALOG.values()]


def check_domain(
    entry_id: str, p: OrderPair, x: Optional[float] = None, y: Optional[float] = None
) -> DomainVerdict:
    """
    Check an entry's lower and upper regions at (μ, ν).

    Args:
        entry_id: Catalog id.
        p: Order pair; Bessel/Struve entries read only ν.
        x: Optional argument; must be positive when given.
        y: Optional second argument for ratio-in-x entries; must exceed x.

    Returns:
        DomainVerdict with per-side validity and boundary proximity.

    Raises:
        UnknownBoundId: no entry with this id.
    """
    entry = get_entry(entry_id)
    q = entry.site(p)
    ordered = True
    if x is not None and not x > 0.0:
        ordered = False
    if entry.needs_y and x is not None and y is not None and not (0.0 < x < y):
        ordered = False
    lower_ok = entry.lower_region is not None and entry.lower_region.contains(q)
    upper_ok = entry.upper_region is not None and entry.upper_region.contains(q)
    near = any(r.near_boundary(q) for r in (entry.lower_region, entry.upper_region) if r is not None)
    return DomainVerdict(
        entry_id=entry.id,
        lower_ok=lower_ok,
        upper_ok=upper_ok,
        near_boundary=near,
        failed_lower=tuple(entry.lower_region.failed(q)) if entry.lower_region else (),
        failed_upper=tuple(entry.upper_region.failed(q)) if entry.upper_region else (),
        has_lower=entry.lower_fn is not None,
        has_upper=entry.upper_fn is not None,
        ordered_xy=ordered,
    )


def _to_float(value: Optional[mpf], log_scale: float) -> Optional[float]:
    if value is None:
        return None
    if log_scale:
        value = value * mp.exp(-log_scale)
    return float(value)


def _relerr(bound: Optional[mpf], target: mpf) -> Optional[float]:
    if bound is None or target == 0:
        return None
    return float(abs(bound / target - 1))


def evaluate_bound(
    entry_id: str,
    p: OrderPair,
    x: float,
    y: Optional[float] = None,
    opts: Optional[EvalOptions] = None,
    *,
    backend: Optional[Backend] = None,
    enforce_domain: bool = True,
) -> BoundEvaluation:
    """
    Evaluate one catalog entry at (μ, ν, x[, y]).

    A side is evaluated when its region contains the site or when the site is
    one of the entry's equality cases. Margins are target - lower and
    upper - target; a side is reported as violated when its margin is below
    -guard, with guard = 10·rel_tol·|target| under the extended-precision
    backend and 10·rel_tol·(cross-product scale) under the double backend.

    Args:
        entry_id: Catalog id.
        p: Order pair.
        x: Argument, x > 0.
        y: Second argument for ratio-in-x entries, y > x.
        opts: Evaluation options; defaults to oracle mode.
        backend: Shared value provider (its options take precedence).
        enforce_domain: When False every present side is evaluated regardless
            of its region (used by sharpness probes).

    Raises:
        UnknownBoundId: no entry with this id.
        DomainError: no side is valid at the site, or x/y are not admissible.
        NonConvergence: propagated from the evaluation.
    """
    entry = get_entry(entry_id)
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"x must be finite and > 0, got {x}")
    if entry.needs_y:
        if y is None or not (math.isfinite(y) and y > x):
            raise DomainError(f"{entry.id} requires 0 < x < y, got x={x}, y={y}")
    verdict = check_domain(entry_id, p, x, y)
    q = entry.site(p)
    equality_hit = entry.equality is not None and entry.equality.predicate(q)
    eq_sides = entry.equality.sides if equality_hit else ()

    lower_on = entry.lower_fn is not None and (
        verdict.lower_ok or "lower" in eq_sides or not enforce_domain
    )
    upper_on = entry.upper_fn is not None and (
        verdict.upper_ok or "upper" in eq_sides or not enforce_domain
    )
    if not (lower_on or upper_on):
        failed = list(verdict.failed_lower) + list(verdict.failed_upper)
        raise DomainError(
            f"{entry.id} is not valid at {q}: violated {', '.join(dict.fromkeys(failed))}"
        )

    if backend is None:
        backend = Backend(opts if opts is not None else EvalOptions(oracle_mode=True))
    rel_tol = backend.opts.rel_tol

    with backend.precision(max(x, y or x)):
        ctx = BoundContext(q, x, y if entry.needs_y else None, backend)
        target = entry.target_fn(ctx)
        lower = entry.lower_fn(ctx) if lower_on else None
        upper = entry.upper_fn(ctx) if upper_on else None
        if backend.oracle or not entry.cross:
            scale = abs(target)
        else:
            scale = ctx.cross_scale()
        guard = GUARD_FACTOR * rel_tol * scale
        margin_lower = target - lower if lower is not None else None
        margin_upper = upper - target if upper is not None else None

        violations = []
        for side, margin in (("lower", margin_lower), ("upper", margin_upper)):
            if margin is not None and margin < -guard:
                violations.append(side)

        abs_target = abs(target)
        log_scale = float(mp.floor(mp.log(abs_target))) if abs_target > mpf("1e300") else 0.0
        result = BoundEvaluation(
            entry_id=entry.id,
            mu=q.mu,
            nu=q.nu,
            x=x,
            y=y if entry.needs_y else None,
            target_value=_to_float(target, log_scale),
            lower=_to_float(lower, log_scale),
            upper=_to_float(upper, log_scale),
            margin_lower=_to_float(margin_lower, log_scale),
            margin_upper=_to_float(margin_upper, log_scale),
            lower_relerr=_relerr(lower, target),
            upper_relerr=_relerr(upper, target),
            log_scale=log_scale,
            domain_ok=verdict.valid,
            lower_ok=verdict.lower_ok,
            upper_ok=verdict.upper_ok,
            equality_hit=equality_hit,
            near_boundary=verdict.near_boundary,
            guard=_to_float(guard, log_scale),
            domain_verdict=verdict.describe(),
            violations=tuple(violations),
        )

    if violations:
        logger.warning(
            "bound_violation", entry_id=entry.id, mu=q.mu, nu=q.nu, x=x, y=y,
            sides=list(violations), margin_lower=result.margin_lower, margin_upper=result.margin_upper,
        )
    return result


def evaluate_sides(
    entry_id: str, p: OrderPair, x: float, backend: Backend, y: Optional[float] = None
) -> Tuple[mpf, Optional[mpf], Optional[mpf]]:
    """(target, lower, upper) in extended precision, ignoring the regions."""
    entry = get_entry(entry_id)
    with backend.precision(max(x, y or x)):
        ctx = BoundContext(entry.site(p), x, y, backend)
        target = entry.target_fn(ctx)
        lower = entry.lower_fn(ctx) if entry.lower_fn else None
        upper = entry.upper_fn(ctx) if entry.upper_fn else None
    return target, lower, upper
