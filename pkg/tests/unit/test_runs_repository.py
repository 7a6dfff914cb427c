"""Tests for sweep runs repository."""

from fractions import Fraction

import pytest

from tubelab.db.repositories.runs import delete_run, get_run, get_run_rows, list_runs, save_sweep
from tubelab.services.sweeps import SweepCell, SweepReport, SweepRow, Theorem

F = Fraction


def _report(theorem=Theorem.main2, ratios=(2.0, 8.0)):
    rows = tuple(
        SweepRow(cell=SweepCell(F(1, 64), 2, 8, 2), measured=r * 10, bound=10.0, ratio=r, note="") for r in ratios
    )
    return SweepReport(theorem=theorem, rows=rows, epsilon=F(1, 10), seed=7, skipped=("skip a", "skip b"))


class TestSaveSweep:
    def test_saves_run_and_rows(self, db_session):
        run = save_sweep(db_session, _report())
        db_session.commit()

        assert run.id is not None
        assert run.theorem == "theorem-main2"
        assert run.epsilon == "1/10"
        assert run.row_count == 2
        assert run.fitted_constant == pytest.approx(4.0)
        assert run.skipped == "skip a\nskip b"
        rows = get_run_rows(db_session, run.id)
        assert [r.ratio for r in rows] == [2.0, 8.0]
        assert rows[0].delta == "1/64"
        assert rows[0].alpha is None

    def test_empty_report(self, db_session):
        run = save_sweep(db_session, _report(ratios=()))
        assert run.row_count == 0
        assert run.fitted_constant is None


class TestQueries:
    def test_list_newest_first(self, db_session):
        first = save_sweep(db_session, _report())
        second = save_sweep(db_session, _report(Theorem.main3))
        db_session.commit()

        assert [r.id for r in list_runs(db_session)] == [second.id, first.id]
        assert [r.id for r in list_runs(db_session, "theorem-main3")] == [second.id]

    def test_get_missing(self, db_session):
        assert get_run(db_session, 999) is None
        assert get_run_rows(db_session, 999) == []

    def test_delete(self, db_session):
        run = save_sweep(db_session, _report())
        db_session.commit()

        assert delete_run(db_session, run.id)
        db_session.commit()
        db_session.expire_all()
        assert get_run(db_session, run.id) is None
        assert get_run_rows(db_session, run.id) == []
        assert not delete_run(db_session, run.id)
