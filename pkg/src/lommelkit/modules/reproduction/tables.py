"""
Regeneration of the relative-error tables and comparison with embedded references.

Each cell is |approx/exact - 1| for one side of a catalog entry, computed in
extended precision and rounded half-even to four decimals. Reference values
ship as CSV files under ``data/``.
"""

import csv
import io
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from lommelkit.core.config import EvalOptions
from lommelkit.core.errors import DomainError, LommelError
from lommelkit.core.logging import get_logger
from lommelkit.core.types import OrderPair
from lommelkit.modules.bounds.catalog import evaluate_sides
from lommelkit.modules.evaluation.backend import Backend

logger = get_logger(__name__)

DATA_DIR = Path(__file__).parent / "data"
CSV_HEADER = ("param", "x", "relerr_computed", "relerr_reference", "pass")
QUANTUM = Decimal("0.0001")
PASS_TOLERANCE = Decimal("0.0001") + Decimal("0.00005")

GRID_SHORT = (0.5, 1.0, 2.5, 5.0, 7.5, 10.0, 15.0, 25.0)
GRID_LONG = GRID_SHORT + (50.0,)
GRID_STRUVE = (0.5, 1.0, 2.5, 5.0, 10.0, 15.0, 25.0, 50.0, 100.0, 200.0)
NU_VALUES = (0.0, 1.0, 2.5, 5.0, 10.0)
MU_MINUS_NU = (-0.5, 2.0, 5.0)


def _pair_rows(nu_values: Sequence[float]) -> Tuple[OrderPair, ...]:
    return tuple(OrderPair(nu + k, nu) for k in MU_MINUS_NU for nu in nu_values)


@dataclass(frozen=True)
class TableSpec:
    """Rows, argument grid and approximating bound of one table."""

    table_id: int
    rows: Tuple[OrderPair, ...]
    x_grid: Tuple[float, ...]
    entry_id: str
    side: str
    struve_rows: bool = False

    def label(self, p: OrderPair) -> str:
        if self.struve_rows:
            return f"nu={p.nu:g}"
        return f"mu={p.mu:g};nu={p.nu:g}"


_SPECS: Dict[int, TableSpec] = {
    1: TableSpec(1, _pair_rows(NU_VALUES), GRID_SHORT, "RATIO_BRACKET", "lower"),
    2: TableSpec(2, _pair_rows(NU_VALUES), GRID_SHORT, "RATIO_BRACKET", "upper"),
    3: TableSpec(3, _pair_rows(NU_VALUES), GRID_LONG, "RATIO_SQRT", "lower"),
    4: TableSpec(4, _pair_rows(NU_VALUES[1:]), GRID_LONG, "RATIO_SQRT", "upper"),
    5: TableSpec(
        5, tuple(OrderPair(nu, nu) for nu in NU_VALUES), GRID_STRUVE, "LLOWERR", "lower",
        struve_rows=True,
    ),
}

TABLE_IDS = tuple(_SPECS)


def table_spec(table_id: int) -> TableSpec:
    try:
        return _SPECS[int(table_id)]
    except (KeyError, ValueError):
        raise DomainError(f"table id must be one of {list(TABLE_IDS)}, got {table_id!r}") from None


def round_half_even(value) -> Decimal:
    """Round a real (float or mpf) to four decimals, ties to even."""
    return Decimal(mpmath.nstr(value, 30, min_fixed=-30, max_fixed=30)).quantize(
        QUANTUM, rounding=ROUND_HALF_EVEN
    )


def load_reference(table_id: int) -> Dict[Tuple[str, float], Decimal]:
    """Reference cells keyed by (row label, x)."""
    path = DATA_DIR / f"table{int(table_id)}.csv"
    lines = [line for line in path.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    xs = [float(v) for v in header[1:]]
    cells: Dict[Tuple[str, float], Decimal] = {}
    for row in reader:
        if not row:
            continue
        for x, value in zip(xs, row[1:]):
            cells[(row[0], x)] = Decimal(value)
    return cells


@dataclass(frozen=True)
class TableCell:
    param: str
    x: float
    computed: Optional[Decimal]
    reference: Optional[Decimal]
    error: Optional[str] = None


@dataclass
class TableReport:
    spec: TableSpec
    cells: List[TableCell] = field(default_factory=list)

    @property
    def computed(self) -> List[List[Optional[Decimal]]]:
        n = len(self.spec.x_grid)
        return [[c.computed for c in self.cells[i : i + n]] for i in range(0, len(self.cells), n)]

    @property
    def reference(self) -> List[List[Optional[Decimal]]]:
        n = len(self.spec.x_grid)
        return [[c.reference for c in self.cells[i : i + n]] for i in range(0, len(self.cells), n)]

    @property
    def max_abs_diff(self) -> Optional[Decimal]:
        diffs = [
            abs(c.computed - c.reference)
            for c in self.cells
            if c.computed is not None and c.reference is not None
        ]
        return max(diffs) if diffs else None


def _relerr_row(args: Tuple[int, OrderPair, dict]) -> List[Tuple[float, Optional[Decimal], Optional[str]]]:
    table_id, p, opts_data = args
    spec = _SPECS[table_id]
    backend = Backend(EvalOptions(**opts_data))
    out = []
    for x in spec.x_grid:
        try:
            target, lower, upper = evaluate_sides(spec.entry_id, p, x, backend)
            approx = lower if spec.side == "lower" else upper
            with backend.precision(x):
                relerr = abs(approx / target - 1)
            out.append((x, round_half_even(relerr), None))
        except (LommelError, ArithmeticError) as exc:
            out.append((x, None, str(exc)))
    return out


def run_table(
    spec: TableSpec, opts: Optional[EvalOptions] = None, workers: int = 1
) -> TableReport:
    """
    Compute every cell of a table; a failing cell is recorded, not raised.

    Args:
        spec: The table.
        opts: Evaluation options; always evaluated in oracle mode.
        workers: Worker processes over rows; the merge keeps row order.
    """
    opts = (opts or EvalOptions()).replace(oracle_mode=True)
    reference = load_reference(spec.table_id)
    tasks = [(spec.table_id, p, opts.model_dump()) for p in spec.rows]
    if workers <= 1:
        rows = [_relerr_row(task) for task in tasks]
    else:
        with Pool(processes=workers) as pool:
            rows = pool.map(_relerr_row, tasks)

    report = TableReport(spec=spec)
    for p, row in zip(spec.rows, rows):
        label = spec.label(p)
        for x, value, error in row:
            if error is not None:
                logger.warning("table_cell_failed", table=spec.table_id, param=label, x=x, error=error)
            report.cells.append(TableCell(label, x, value, reference.get((label, x)), error))
    logger.info("table_computed", table=spec.table_id, cells=len(report.cells))
    return report


@dataclass(frozen=True)
class CellDiff:
    param: str
    x: float
    computed: Optional[Decimal]
    reference: Optional[Decimal]
    passed: bool


@dataclass
class DiffReport:
    table_id: int
    cells: List[CellDiff]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells)

    def failures(self) -> List[CellDiff]:
        return [c for c in self.cells if not c.passed]

    def to_csv(self) -> str:
        output = io.StringIO()
        writer = csv.writer(output, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for c in self.cells:
            writer.writerow([
                c.param,
                f"{c.x:g}",
                "" if c.computed is None else str(c.computed),
                "" if c.reference is None else str(c.reference),
                "true" if c.passed else "false",
            ])
        return output.getvalue()

    def write_csv(self, path: Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(self.to_csv())


def compare_reference(report: TableReport) -> DiffReport:
    """Diff computed cells against references; a cell passes within 1e-4 plus half a printed unit."""
    cells = []
    for c in report.cells:
        ok = (
            c.computed is not None
            and c.reference is not None
            and abs(c.computed - c.reference) <= PASS_TOLERANCE
        )
        cells.append(CellDiff(c.param, c.x, c.computed, c.reference, ok))
    diff = DiffReport(report.spec.table_id, cells)
    logger.info(
        "table_compared", table=diff.table_id, cells=len(cells), failures=len(diff.failures())
    )
    return diff


def run_all(opts: Optional[EvalOptions] = None, workers: int = 1) -> List[DiffReport]:
    return [compare_reference(run_table(_SPECS[t], opts, workers)) for t in TABLE_IDS]
