import logging
import sys
from typing import TYPE_CHECKING

from tubelab.commands.common import emit
from tubelab.constants import EXIT_OK, EXIT_PARAMETER_ERROR, MSG_RUN_NOT_FOUND
from tubelab.db.dependencies import get_session
from tubelab.db.session import ensure_schema
from tubelab.db.repositories.runs import get_run, get_run_rows, list_runs

if TYPE_CHECKING:
    from tubelab.cli import ExperimentConfig

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("report", help="список сохранённых прогонов или строки одного прогона")
    parser.add_argument("--run", dest="run_id", type=int, help="номер прогона")
    parser.add_argument("--theorem", help="фильтр списка по теореме")
    parser.set_defaults(handler=handle)


def _fmt(value) -> str:
    return "" if value is None else f"{value:.6g}" if isinstance(value, float) else str(value)


def handle(config: "ExperimentConfig") -> int:
    with get_session() as session:
        ensure_schema(session)
        run_id = config.get("run_id")
        if run_id is None:
            lines = ["id\ttheorem\tseed\tepsilon\trows\tconstant\tspread\tdrift"]
            for run in list_runs(session, config.get("theorem")):
                lines.append(
                    "\t".join(
                        [
                            str(run.id),
                            run.theorem,
                            str(run.seed),
                            run.epsilon,
                            str(run.row_count),
                            _fmt(run.fitted_constant),
                            _fmt(run.ratio_spread),
                            str(bool(run.drift)),
                        ]
                    )
                )
            emit("\n".join(lines))
            return EXIT_OK

        run = get_run(session, run_id)
        if run is None:
            print(f"{MSG_RUN_NOT_FOUND}{run_id}", file=sys.stderr)
            return EXIT_PARAMETER_ERROR
        lines = ["theorem\tdelta\tW\tX\tr\talpha\tmeasured\tbound\tratio\tnote"]
        for row in get_run_rows(session, run_id):
            lines.append(
                "\t".join(
                    [
                        run.theorem,
                        row.delta,
                        str(row.W),
                        str(row.X),
                        _fmt(row.r),
                        row.alpha or "",
                        _fmt(row.measured),
                        _fmt(row.bound),
                        _fmt(row.ratio),
                        row.note,
                    ]
                )
            )
        emit("\n".join(lines))
        return EXIT_OK
