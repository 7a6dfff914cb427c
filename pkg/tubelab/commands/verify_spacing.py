import logging
from typing import TYPE_CHECKING

from tubelab.commands.common import add_input, emit, output_path
from tubelab.constants import EXIT_OK, EXIT_VERIFICATION_FAILED
from tubelab.services.duality import transfer_spacing
from tubelab.services.geometry import Orientation
from tubelab.services.incidence import verify_ball_grid_spacing, verify_tube_spacing
from tubelab.services.instance_io import read_instance
from tubelab.services.schemas import GridSpacingModel, TubeSpacingModel, write_json

if TYPE_CHECKING:
    from tubelab.cli import ExperimentConfig

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify-spacing", help="проверить условие разреженности (W, X)")
    parser.add_argument("target", choices=("tubes", "balls", "positions"))
    add_input(parser)
    parser.add_argument("--slack", type=int, default=1, help="допуск для трубок: slack·⌈X/W⌉ и 1/(slack·X)")
    parser.add_argument(
        "--orientation", type=Orientation, choices=list(Orientation), default=Orientation.u_long, help="клетки шаров"
    )
    parser.set_defaults(handler=handle)


def handle(config: "ExperimentConfig") -> int:
    """Отчёт пишется всегда; непрошедшая проверка даёт код 1."""
    instance = read_instance(config.input)
    params = instance.params
    path = output_path(config.out, f"spacing-{config.target}.json")

    if config.target == "tubes":
        report = verify_tube_spacing(instance.tubes, params, slack=config.get("slack", 1))
        write_json(path, TubeSpacingModel.of(report))
        passed = report.passed
        detail = f"max_count={report.max_count}/{report.count_limit}"
    elif config.target == "balls":
        grid = verify_ball_grid_spacing(instance.balls, params, config.get("orientation", Orientation.u_long))
        write_json(path, GridSpacingModel.of(grid))
        passed = grid.passed
        detail = f"cells={grid.cells_used}"
    else:
        transfer = transfer_spacing(instance.tubes, params, Orientation.v_long)
        write_json(path, GridSpacingModel.of_transfer(transfer))
        passed = transfer.passed
        detail = f"cells={transfer.report.cells_used}"

    emit(f"spacing-{config.target}\tpassed={passed}\t{detail}")
    if not passed:
        logger.warning("Spacing check %s failed for %s", config.target, config.input)
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK
