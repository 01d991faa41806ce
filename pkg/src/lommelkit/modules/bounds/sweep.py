"""
Randomised verification of the inequality catalog.

Points are drawn with a seeded numpy Generator in the parent process, so a
sweep with a given seed and sample count evaluates the same sites whatever
the number of workers. Each point is evaluated against every entry that is
valid there, sharing one Backend so common values are computed once.
"""

import math
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from lommelkit.core.config import EvalOptions
from lommelkit.core.errors import DomainError, LommelError, UnknownBoundId
from lommelkit.core.logging import get_logger
from lommelkit.core.types import OrderPair
from lommelkit.modules.bounds.catalog import CATALOG, check_domain, evaluate_bound
from lommelkit.modules.evaluation.backend import Backend

logger = get_logger(__name__)

MU_RANGE = (-3.0, 15.0)
NU_RANGE = (-3.0, 16.0)
X_MIN_LOG = 1e-3
_MAX_REJECTIONS = 10_000


@dataclass(frozen=True)
class GridSpec:
    """Sampling box and argument range for a sweep."""

    mu_range: Tuple[float, float] = MU_RANGE
    nu_range: Tuple[float, float] = NU_RANGE
    x_max: float = 60.0
    x_min_log: float = X_MIN_LOG


@dataclass(frozen=True)
class SweepPoint:
    mu: float
    nu: float
    x: float
    y: float
    entry_id: Optional[str] = None


@dataclass(frozen=True)
class Violation:
    entry_id: str
    side: str
    mu: float
    nu: float
    x: float
    y: Optional[float]
    margin: float
    guard: float
    out_of_domain: bool = False


@dataclass(frozen=True)
class EvaluationFailure:
    entry_id: str
    mu: float
    nu: float
    x: float
    reason: str


@dataclass
class SweepReport:
    """Outcome of a sweep; ``ok`` when no in-domain violation was found."""

    seed: Optional[int]
    points: int = 0
    checks: int = 0
    equality_checks: int = 0
    violations: List[Violation] = field(default_factory=list)
    failures: List[EvaluationFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(not v.out_of_domain for v in self.violations)

    def merge(self, other: "SweepReport") -> None:
        self.points += other.points
        self.checks += other.checks
        self.equality_checks += other.equality_checks
        self.violations.extend(other.violations)
        self.failures.extend(other.failures)


def _draw_x(rng: np.random.Generator, spec: GridSpec) -> float:
    if rng.random() < 0.5:
        x = float(rng.uniform(0.0, spec.x_max))
        return x if x > 0.0 else spec.x_min_log
    return float(math.exp(rng.uniform(math.log(spec.x_min_log), math.log(spec.x_max))))


def _draw_pair(rng: np.random.Generator, spec: GridSpec, entry_id: str) -> OrderPair:
    entry = CATALOG[entry_id]
    for _ in range(_MAX_REJECTIONS):
        mu = float(rng.uniform(*spec.mu_range))
        nu = float(rng.uniform(*spec.nu_range))
        if mu <= spec.mu_range[0]:
            continue
        p = OrderPair(mu, nu)
        if entry.region.contains(entry.site(p)):
            return p
    raise DomainError(f"could not sample the region of {entry_id} inside the sweep box")


def generate_points(
    seed: int, samples: int, spec: Optional[GridSpec] = None,
    entry_ids: Optional[Sequence[str]] = None,
) -> List[SweepPoint]:
    """
    Draw ``samples`` sites, round-robin over the entries so each region is covered.

    Args:
        seed: Generator seed.
        samples: Number of sites.
        spec: Sampling box; defaults to GridSpec().
        entry_ids: Entries to cover; defaults to the whole catalog.

    Returns:
        Sites in draw order, each tagged with the entry it was drawn for.
    """
    spec = spec or GridSpec()
    ids = list(entry_ids) if entry_ids else list(CATALOG)
    rng = np.random.default_rng(seed)
    points = []
    for n in range(samples):
        entry_id = ids[n % len(ids)]
        p = _draw_pair(rng, spec, entry_id)
        x = _draw_x(rng, spec)
        y = _draw_x(rng, spec)
        if y <= x:
            x, y = (y, x) if y < x else (x, x * (1.0 + float(rng.uniform(0.01, 1.0))))
        points.append(SweepPoint(p.mu, p.nu, x, y, entry_id))
    return points


def _check_point(
    point: SweepPoint, ids: Sequence[str], opts: EvalOptions, enforce_domain: bool
) -> SweepReport:
    report = SweepReport(seed=None, points=1)
    backend = Backend(opts)
    p = OrderPair(point.mu, point.nu)
    for entry_id in ids:
        verdict = check_domain(entry_id, p, point.x, point.y)
        in_domain = verdict.lower_ok or verdict.upper_ok
        try:
            result = evaluate_bound(
                entry_id, p, point.x, point.y, backend=backend, enforce_domain=enforce_domain
            )
        except DomainError:
            continue
        except (LommelError, ArithmeticError, ValueError) as exc:
            report.failures.append(EvaluationFailure(entry_id, point.mu, point.nu, point.x, str(exc)))
            continue
        report.checks += 1
        if result.equality_hit:
            report.equality_checks += 1
        for side in result.violations:
            margin = result.margin_lower if side == "lower" else result.margin_upper
            report.violations.append(
                Violation(
                    entry_id=entry_id, side=side, mu=result.mu, nu=result.nu, x=point.x,
                    y=result.y, margin=margin, guard=result.guard,
                    out_of_domain=not in_domain,
                )
            )
    return report


def _sweep_chunk(args: Tuple[List[SweepPoint], Tuple[str, ...], dict, bool]) -> SweepReport:
    points, ids, opts_data, enforce_domain = args
    opts = EvalOptions(**opts_data)
    report = SweepReport(seed=None)
    for point in points:
        report.merge(_check_point(point, ids, opts, enforce_domain))
    return report


def _chunks(points: List[SweepPoint], size: int) -> Iterable[List[SweepPoint]]:
    for start in range(0, len(points), size):
        yield points[start : start + size]


def sweep(
    seed: int = 42,
    samples: int = 10_000,
    *,
    entry_ids: Optional[Sequence[str]] = None,
    points: Optional[Sequence[SweepPoint]] = None,
    opts: Optional[EvalOptions] = None,
    spec: Optional[GridSpec] = None,
    workers: int = 1,
    chunk_size: int = 16,
) -> SweepReport:
    """
    Check catalog entries at random (or given) sites.

    Generated points are evaluated only where an entry is valid. Explicit
    ``points`` are evaluated with every side switched on, and violations
    outside the stated region are reported with ``out_of_domain=True``;
    these do not make the report fail.

    Args:
        seed: Generator seed.
        samples: Number of random sites.
        entry_ids: Entries to check; defaults to the whole catalog.
        points: Explicit sites, bypassing the generator.
        opts: Evaluation options; defaults to oracle mode.
        spec: Sampling box.
        workers: Worker processes; 1 evaluates in-process.
        chunk_size: Sites per worker task.

    Returns:
        SweepReport with violations and evaluation failures in point order.
    """
    ids = tuple(entry_ids) if entry_ids else tuple(CATALOG)
    for entry_id in ids:
        if entry_id not in CATALOG:
            raise UnknownBoundId(f"unknown bound id {entry_id!r}")
    opts = opts if opts is not None else EvalOptions(oracle_mode=True)
    enforce_domain = points is None
    site_list = list(points) if points is not None else generate_points(seed, samples, spec, ids)

    logger.info("sweep_started", seed=seed, points=len(site_list), entries=len(ids), workers=workers)
    tasks = [(chunk, ids, opts.model_dump(), enforce_domain) for chunk in _chunks(site_list, chunk_size)]
    report = SweepReport(seed=seed if points is None else None)
    if workers <= 1:
        for task in tasks:
            report.merge(_sweep_chunk(task))
    else:
        with Pool(processes=workers) as pool:
            for part in pool.imap(_sweep_chunk, tasks):
                report.merge(part)

    for failure in report.failures:
        logger.warning("sweep_evaluation_failed", entry_id=failure.entry_id, mu=failure.mu,
                       nu=failure.nu, x=failure.x, reason=failure.reason)
    logger.info(
        "sweep_finished", seed=seed, points=report.points, checks=report.checks,
        violations=len(report.violations), failures=len(report.failures), ok=report.ok,
    )
    return report


def sharpness_probe(
    entry_id: str, p: OrderPair, x_grid: Sequence[float], opts: Optional[EvalOptions] = None,
    y_factor: float = 2.0,
) -> Optional[Violation]:
    """
    Evaluate an entry just outside its region and return the first violation.

    Ratio-in-x entries use y = y_factor·x.

    Returns:
        The first Violation along ``x_grid``, or None when the entry still holds.
    """
    backend = Backend(opts if opts is not None else EvalOptions(oracle_mode=True))
    entry = CATALOG.get(entry_id)
    for x in x_grid:
        y = x * y_factor if entry is not None and entry.needs_y else None
        result = evaluate_bound(entry_id, p, x, y, backend=backend, enforce_domain=False)
        for side in result.violations:
            margin = result.margin_lower if side == "lower" else result.margin_upper
            return Violation(entry_id, side, result.mu, result.nu, x, y, margin, result.guard,
                             out_of_domain=not result.domain_ok)
    return None
