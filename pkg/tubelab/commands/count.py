import logging
from typing import TYPE_CHECKING

from tubelab.commands.common import add_input, emit, output_path
from tubelab.constants import EXIT_OK
from tubelab.services.incidence import Engine, count_incidences
from tubelab.services.instance_io import read_instance
from tubelab.services.schemas import IncidenceSummary, write_json

if TYPE_CHECKING:
    from tubelab.cli import ExperimentConfig

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("count", help="посчитать инцидентности I(𝔹, 𝕋)")
    add_input(parser)
    parser.add_argument("--engine", type=Engine, choices=list(Engine), default=Engine.grid)
    parser.set_defaults(handler=handle)


def handle(config: "ExperimentConfig") -> int:
    """Отчёт движка; при --engine both расхождение движков завершает команду с кодом 1."""
    instance = read_instance(config.input)
    engine: Engine = config.get("engine", Engine.grid)
    report = count_incidences(instance.balls, instance.tubes, engine, jobs=config.jobs, K=instance.K)
    write_json(output_path(config.out, "count.json"), IncidenceSummary.of(report, engine.value))
    lines = ["bucket\tballs"] + [f"{bucket}\t{n}" for bucket, n in sorted(report.histogram.items())]
    emit(f"# total={report.total}\n" + "\n".join(lines))
    return EXIT_OK
