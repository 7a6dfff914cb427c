import logging
from typing import TYPE_CHECKING

from tubelab.commands.common import add_input, emit, maybe_params, need, output_path, rational
from tubelab.constants import EXIT_OK
from tubelab.services.instance_io import Instance, read_instance, write_instance
from tubelab.services.incidence import rich_balls, rich_tubes

if TYPE_CHECKING:
    from tubelab.cli import ExperimentConfig

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("rich", help="r-богатые шары B_r(𝕋) или трубки T_r(𝔹)")
    parser.add_argument("target", choices=("balls", "tubes"))
    add_input(parser)
    parser.add_argument("--r", dest="r", type=int, required=True, help="порог богатства")
    parser.add_argument("--step", type=rational, help="шаг решётки шаров (balls), по умолчанию δ/2")
    parser.add_argument("--net", type=rational, help="шаг сети трубок (tubes), по умолчанию δ/2")
    parser.set_defaults(handler=handle)


def handle(config: "ExperimentConfig") -> int:
    instance = read_instance(config.input)
    (r,) = need(config, "r")
    params = maybe_params(instance)

    if config.target == "balls":
        found = rich_balls(
            instance.tubes,
            r,
            delta=instance.delta,
            step=config.get("step"),
            params=params,
            jobs=config.jobs,
            K=instance.K,
        )
        result = Instance(instance.delta, balls=found.members, W=instance.W, X=instance.X, K=instance.K)
    else:
        found = rich_tubes(instance.balls, r, config.get("net"), K=instance.K, params=params)
        result = Instance(instance.delta, tubes=found.members, W=instance.W, X=instance.X, K=instance.K)

    write_instance(output_path(config.out, f"rich-{config.target}.csv"), result)
    emit(f"rich-{config.target}\tr={r}\tcount={len(found)}")
    return EXIT_OK
