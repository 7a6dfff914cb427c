"""Tests for theorem sweeps."""

from fractions import Fraction

import pytest

from tubelab.exceptions import SpacingViolation
from tubelab.services.sweeps import (
    SweepCell,
    SweepReport,
    SweepRow,
    Theorem,
    grid_cells,
    hypothesis_holds,
    rich_bound,
    sweep_theorem,
)

F = Fraction


def _report(ratios_by_delta, epsilon=F(1, 10)):
    rows = []
    for delta, ratios in ratios_by_delta.items():
        for ratio in ratios:
            cell = SweepCell(delta=delta, W=2, X=4, r=2)
            rows.append(SweepRow(cell=cell, measured=ratio, bound=1.0, ratio=ratio))
    return SweepReport(theorem=Theorem.main2, rows=tuple(rows), epsilon=epsilon, seed=0)


class TestBounds:
    def test_rich_bound(self):
        assert rich_bound(10, 2, 8, 2) == pytest.approx(40)

    @pytest.mark.parametrize(
        ("W", "X", "r", "expected"),
        [(2, 8, 2, True), (2, 8, 1, False), (64, 64, 2, False)],
    )
    def test_hypothesis(self, W, X, r, expected):
        """r > max(δ^(1−2ε)·WX, 1) при δ = 1/64, ε = 1/10."""
        assert hypothesis_holds(F(1, 64), W, X, r, F(1, 10)) is expected


class TestReport:
    def test_fitted_constant_is_geometric_mean(self):
        report = _report({F(1, 4): [1.0, 100.0]})
        assert report.fitted_constant == pytest.approx(10)
        assert report.ratio_spread == pytest.approx(100)

    def test_empty_report(self):
        report = _report({})
        assert report.fitted_constant is None
        assert report.ratio_spread is None
        assert not report.drift

    def test_drift_detected(self):
        report = _report({F(1, 4): [1.0], F(1, 8): [10.0], F(1, 16): [100.0]})
        assert report.drift

    def test_flat_ratios_do_not_drift(self):
        report = _report({F(1, 4): [2.0], F(1, 8): [2.0], F(1, 16): [2.0]})
        assert not report.drift

    def test_two_scales_never_drift(self):
        report = _report({F(1, 4): [1.0], F(1, 8): [100.0]})
        assert not report.drift

    def test_non_monotone_trend(self):
        report = _report({F(1, 4): [1.0], F(1, 8): [100.0], F(1, 16): [1.0]})
        assert not report.drift

    def test_tsv(self):
        report = _report({F(1, 4): [1.5]})
        lines = report.to_tsv().splitlines()
        assert lines[0].split("\t")[:3] == ["theorem", "delta", "W"]
        assert lines[1].split("\t")[:6] == ["theorem-main2", "1/4", "2", "4", "2", ""]


class TestGridCells:
    def test_drops_invalid_pairs(self):
        cells = grid_cells([F(1, 8)], [2, 16], [4, 16], rs=[2])
        assert [(c.W, c.X) for c in cells] == [(2, 4)]

    def test_alphas(self):
        cells = grid_cells([F(1, 64)], [4], [16], alphas=[F(1, 4), F(1, 2)])
        assert [c.alpha for c in cells] == [F(1, 4), F(1, 2)]
        assert all(c.r is None for c in cells)


class TestSweep:
    def test_main2(self):
        cells = grid_cells([F(1, 32), F(1, 64)], [2], [8], rs=[1, 2])
        report = sweep_theorem(Theorem.main2, cells, seed=1)
        assert len(report.rows) == 2
        assert len(report.skipped) == 2
        assert all(row.ratio > 0 for row in report.rows)
        assert report.fitted_constant is not None

    def test_main3(self):
        report = sweep_theorem(Theorem.main3, [SweepCell(F(1, 64), 2, 8, 2)])
        assert len(report.rows) == 1
        assert report.rows[0].measured > 0

    def test_planted_violation_raises(self):
        """Лишний шар в занятой клетке останавливает прогон до сравнения с оценкой."""
        cells = [SweepCell(F(1, 64), 4, 16, 3)]
        with pytest.raises(SpacingViolation, match="delta=1/64 W=4 X=16 r=3") as exc_info:
            sweep_theorem(Theorem.main, cells, seed=3, plant_violation=True)
        assert not exc_info.value.report.passed

    def test_furstenberg(self):
        cells = [SweepCell(F(1, 256), 4, 4, alpha=F(1, 4))]
        report = sweep_theorem(Theorem.furstenberg, cells)
        assert len(report.rows) == 1
        assert report.rows[0].measured == 9

    def test_furstenberg_bad_cells_skipped(self, caplog):
        cells = [SweepCell(F(1, 256), 2, 8, alpha=F(1, 4)), SweepCell(F(1, 256), 4, 4)]
        report = sweep_theorem(Theorem.furstenberg, cells)
        assert report.rows == ()
        assert len(report.skipped) == 2
        assert "skip" in caplog.text
