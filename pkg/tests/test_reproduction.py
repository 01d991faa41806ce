"""
Tests for table regeneration and the reference comparison.
"""

from dataclasses import replace
from decimal import Decimal

import pytest

from lommelkit.core.errors import DomainError
from lommelkit.core.types import OrderPair
from lommelkit.modules.reproduction.tables import (
    CSV_HEADER,
    TABLE_IDS,
    TableSpec,
    compare_reference,
    load_reference,
    round_half_even,
    run_all,
    run_table,
    table_spec,
)


def _single_row(table_id: int, p: OrderPair) -> TableSpec:
    return replace(table_spec(table_id), rows=(p,))


def _cell(report, x: float):
    return next(c for c in report.cells if c.x == x)


class TestRounding:
    @pytest.mark.parametrize("value,expected", [
        (0.00004999, "0.0000"),
        (0.00015001, "0.0002"),
        (0.082949, "0.0829"),
        (23.90731, "23.9073"),
        (0, "0.0000"),
    ])
    def test_four_decimals(self, value, expected):
        assert round_half_even(value) == Decimal(expected)


class TestReferenceData:
    def test_table_ids(self):
        assert TABLE_IDS == (1, 2, 3, 4, 5)

    @pytest.mark.parametrize("table_id,cells", [(1, 120), (2, 120), (3, 135), (4, 108), (5, 50)])
    def test_shapes(self, table_id, cells):
        spec = table_spec(table_id)
        reference = load_reference(table_id)
        assert len(reference) == cells == len(spec.rows) * len(spec.x_grid)
        for p in spec.rows:
            for x in spec.x_grid:
                assert (spec.label(p), x) in reference

    def test_unknown_table(self):
        with pytest.raises(DomainError):
            table_spec(6)

    def test_ratio_errors_vanish_at_large_argument(self):
        reference = load_reference(1)
        for p in table_spec(1).rows:
            label = table_spec(1).label(p)
            column = [reference[(label, x)] for x in (10.0, 15.0, 25.0)]
            assert column == sorted(column, reverse=True)


class TestSpotValues:
    """Single cells against the published four-decimal values"""

    @pytest.mark.parametrize("table_id,mu,nu,x,expected", [
        (1, -0.5, 0.0, 1.0, "0.0829"),
        (2, 2.0, 0.0, 0.5, "23.9073"),
        (3, -0.5, 0.0, 1.0, "0.2333"),
        (3, 4.5, 5.0, 5.0, "0.0105"),
        (4, 15.0, 10.0, 50.0, "0.0019"),
        (5, 0.0, 0.0, 5.0, "0.1830"),
        (5, 10.0, 10.0, 100.0, "0.0519"),
    ])
    def test_cell(self, table_id, mu, nu, x, expected):
        report = run_table(_single_row(table_id, OrderPair(mu, nu)))
        cell = _cell(report, x)
        assert cell.error is None
        assert abs(cell.computed - Decimal(expected)) <= Decimal("0.0001")
        assert cell.reference == Decimal(expected)


class TestCompareReference:
    def test_row_passes(self):
        diff = compare_reference(run_table(_single_row(3, OrderPair(0.5, 1.0))))
        assert diff.passed
        assert len(diff.cells) == 9

    def test_perturbed_reference_fails_one_cell(self):
        report = run_table(_single_row(1, OrderPair(2.0, 0.0)))
        target = report.cells[2]
        report.cells[2] = replace(target, reference=target.reference + Decimal("0.0010"))
        diff = compare_reference(report)
        assert not diff.passed
        assert [(c.param, c.x) for c in diff.failures()] == [(target.param, target.x)]

    def test_csv_is_deterministic(self):
        spec = _single_row(5, OrderPair(1.0, 1.0))
        first = compare_reference(run_table(spec)).to_csv()
        second = compare_reference(run_table(spec)).to_csv()
        assert first == second
        lines = first.splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert lines[1].startswith("nu=1,0.5,")
        assert lines[1].endswith(",true")

    def test_write_csv(self, tmp_path):
        diff = compare_reference(run_table(_single_row(2, OrderPair(0.5, 1.0))))
        out = tmp_path / "table2.csv"
        diff.write_csv(out)
        assert out.read_text(encoding="utf-8") == diff.to_csv()

    def test_workers_keep_row_order(self):
        spec = replace(table_spec(4), rows=table_spec(4).rows[:3])
        serial = run_table(spec)
        parallel = run_table(spec, workers=2)
        assert serial.cells == parallel.cells


@pytest.mark.slow
@pytest.mark.parametrize("table_id", TABLE_IDS)
def test_full_table_matches_reference(table_id):
    report = run_table(table_spec(table_id))
    diff = compare_reference(report)
    assert diff.passed, diff.failures()[:5]
    assert report.max_abs_diff <= Decimal("0.00015")


@pytest.mark.slow
def test_run_all_in_parallel():
    diffs = run_all(workers=2)
    assert [d.table_id for d in diffs] == list(TABLE_IDS)
    assert all(d.passed for d in diffs)
