from sqlalchemy import delete, select
from sqlalchemy.orm import Session

from tubelab.db.models import SweepRowRecord, SweepRun
from tubelab.services.sweeps import SweepReport
from tubelab.utils import format_rational


def save_sweep(session: Session, report: SweepReport) -> SweepRun:
    """Сохраняет прогон вместе со строками (без commit)."""
    run = SweepRun(
        theorem=report.theorem.value,
        seed=report.seed,
        epsilon=format_rational(report.epsilon),
        fitted_constant=report.fitted_constant,
        ratio_spread=report.ratio_spread,
        drift=report.drift,
        row_count=len(report.rows),
        skipped="\n".join(report.skipped),
    )
    for row in report.rows:
        cell = row.cell
        run.rows.append(
            SweepRowRecord(
                delta=format_rational(cell.delta),
                W=cell.W,
                X=cell.X,
                r=cell.r,
                alpha=None if cell.alpha is None else format_rational(cell.alpha),
                measured=row.measured,
                bound=row.bound,
                ratio=row.ratio,
                note=row.note,
            )
        )
    session.add(run)
    session.flush()
    session.refresh(run)
    return run


def list_runs(session: Session, theorem: str | None = None) -> list[SweepRun]:
    """Возвращает прогоны, новые первыми."""
    query = select(SweepRun).order_by(SweepRun.id.desc())
    if theorem is not None:
        query = query.where(SweepRun.theorem == theorem)
    return list(session.execute(query).scalars().all())


def get_run(session: Session, run_id: int) -> SweepRun | None:
    return session.execute(select(SweepRun).where(SweepRun.id == run_id)).scalar_one_or_none()


def get_run_rows(session: Session, run_id: int) -> list[SweepRowRecord]:
    result = session.execute(
        select(SweepRowRecord).where(SweepRowRecord.run_id == run_id).order_by(SweepRowRecord.id)
    )
    return list(result.scalars().all())


def delete_run(session: Session, run_id: int) -> bool:
    """Удаляет прогон и его строки (без commit)."""
    session.execute(delete(SweepRowRecord).where(SweepRowRecord.run_id == run_id))
    result = session.execute(delete(SweepRun).where(SweepRun.id == run_id))
    return (result.rowcount or 0) > 0  # type: ignore[attr-defined]
