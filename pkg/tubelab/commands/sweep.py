import logging
from fractions import Fraction
from typing import TYPE_CHECKING

from tubelab.commands.common import emit, int_list, need, output_path, rational, rational_list
from tubelab.constants import EXIT_OK
from tubelab.db.dependencies import get_session
from tubelab.db.session import ensure_schema
from tubelab.db.repositories.runs import save_sweep
from tubelab.services.sweeps import Theorem, grid_cells, sweep_theorem

if TYPE_CHECKING:
    from tubelab.cli import ExperimentConfig

logger = logging.getLogger(__name__)

# Сетки по умолчанию: W, X, r, α
DEFAULT_GRIDS = {
    Theorem.main2: ((2, 4), (8, 16), (2, 4), ()),
    Theorem.main3: ((2, 4), (8, 16), (2, 4), ()),
    Theorem.main: ((2, 4), (8, 16), (2, 4), ()),
    Theorem.furstenberg: ((4,), (16,), (), (Fraction(3, 10), Fraction(1, 2), Fraction(7, 10))),
}


def register(subparsers) -> None:
    parser = subparsers.add_parser("sweep", help="сравнить измерения с оценкой теоремы на сетке параметров")
    parser.add_argument("target", choices=[t.value for t in Theorem])
    parser.add_argument("--deltas", type=rational_list, required=True, help="δ через запятую: 1/64,1/128")
    parser.add_argument("--Ws", dest="Ws", type=int_list, help="значения W через запятую")
    parser.add_argument("--Xs", dest="Xs", type=int_list, help="значения X через запятую")
    parser.add_argument("--rs", type=int_list, help="пороги r через запятую")
    parser.add_argument("--alphas", type=rational_list, help="значения α через запятую (furstenberg)")
    parser.add_argument("--epsilon", type=rational, help="ε в гипотезе r > δ^{1−2ε}·WX")
    parser.add_argument("--plant-violation", action="store_true", help="добавить шар в занятую клетку (theorem-main)")
    parser.add_argument("--save", action="store_true", help="сохранить прогон в журнал")
    parser.set_defaults(handler=handle)


def handle(config: "ExperimentConfig") -> int:
    """TSV в stdout и в файл; нарушение разреженности прерывает прогон раньше сравнения с оценкой."""
    theorem = Theorem(config.target)
    (deltas,) = need(config, "deltas")
    Ws, Xs, rs, alphas = DEFAULT_GRIDS[theorem]
    cells = grid_cells(
        deltas,
        config.get("Ws", Ws),
        config.get("Xs", Xs),
        config.get("rs", rs),
        config.get("alphas", alphas),
    )
    report = sweep_theorem(
        theorem,
        cells,
        epsilon=config.get("epsilon"),
        seed=config.seed,
        jobs=config.jobs,
        plant_violation=config.get("plant_violation", False),
    )
    tsv = report.to_tsv()
    output_path(config.out, f"sweep-{theorem.value}.tsv").write_text(tsv, encoding="utf-8")
    emit(tsv)
    for note in report.skipped:
        emit(f"# {note}")
    emit(f"# constant={report.fitted_constant}\tspread={report.ratio_spread}\tdrift={report.drift}")

    if config.get("save", False):
        with get_session() as session:
            ensure_schema(session)
            run = save_sweep(session, report)
            session.commit()
            logger.info("Saved sweep run %d (%s, %d rows)", run.id, theorem.value, len(report.rows))
    return EXIT_OK
