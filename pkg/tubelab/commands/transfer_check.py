import logging
from typing import TYPE_CHECKING

from tubelab.commands.common import add_input, emit, output_path
from tubelab.constants import EXIT_OK
from tubelab.exceptions import SpacingViolation
from tubelab.services.duality import transfer_spacing
from tubelab.services.geometry import Orientation
from tubelab.services.instance_io import read_instance
from tubelab.services.schemas import GridSpacingModel, write_json

if TYPE_CHECKING:
    from tubelab.cli import ExperimentConfig

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("transfer-check", help="перенести разреженность трубок на двойственные шары")
    add_input(parser)
    parser.add_argument("--orientation", type=Orientation, choices=list(Orientation), default=Orientation.u_long)
    parser.set_defaults(handler=handle)


def handle(config: "ExperimentConfig") -> int:
    """Нарушение называет клетку и завершает команду с кодом 1."""
    instance = read_instance(config.input)
    orientation = config.get("orientation", Orientation.u_long)
    result = transfer_spacing(instance.tubes, instance.params, orientation)
    write_json(output_path(config.out, "transfer.json"), GridSpacingModel.of_transfer(result))
    cell = result.report.offending
    where = "" if cell is None else f"\tcell=({cell.lower_left[0]}, {cell.lower_left[1]})"
    emit(f"transfer-check\tpassed={result.passed}{where}")
    if not result.passed:
        raise SpacingViolation(f"клетка {cell} содержит {result.report.offending_count} шаров", result.report)
    return EXIT_OK
