import logging
from typing import TYPE_CHECKING

import numpy as np

from tubelab.commands.common import add_input, emit, output_path
from tubelab.constants import EXIT_OK, MSG_DUALITY_MISMATCH
from tubelab.exceptions import InvariantViolation
from tubelab.services.constructions import dual_pairs
from tubelab.services.duality import incidence_preserved, l1_inverse, l1_of_ball, l2_inverse, l2_of_ball
from tubelab.services.instance_io import Instance, read_instance, write_instance

if TYPE_CHECKING:
    from tubelab.cli import ExperimentConfig

logger = logging.getLogger(__name__)

MAPS = {
    "l1": (l1_of_ball, l1_inverse),
    "l2": (l2_of_ball, l2_inverse),
}


def register(subparsers) -> None:
    parser = subparsers.add_parser("dualize", help="перевести экземпляр в двойственное пространство")
    add_input(parser)
    parser.add_argument("--dir", dest="direction", choices=tuple(MAPS), default="l1")
    parser.add_argument("--pairs", type=int, default=0, help="проверить сохранение инцидентности на N парах шаров")
    parser.set_defaults(handler=handle)


def check_pairs(instance: Instance, pairs: int, seed: int) -> int:
    """Сравнивает обе стороны двойственности на случайных парах у порога инцидентности."""
    rng = np.random.default_rng(seed)
    mismatches = sum(1 for b1, b2 in dual_pairs(instance.delta, pairs, rng) if not incidence_preserved(b1, b2).equal)
    logger.info("Duality check: %d pairs, %d mismatches", pairs, mismatches)
    if mismatches:
        raise InvariantViolation(f"{MSG_DUALITY_MISMATCH}: {mismatches} из {pairs}")
    return pairs


def handle(config: "ExperimentConfig") -> int:
    instance = read_instance(config.input)
    to_tube, to_ball = MAPS[config.get("direction", "l1")]
    dual = Instance(
        delta=instance.delta,
        balls=tuple(to_ball(t) for t in instance.tubes),
        tubes=tuple(to_tube(b) for b in instance.balls),
        W=instance.W,
        X=instance.X,
        K=instance.K,
    )
    write_instance(output_path(config.out, f"dual-{config.get('direction', 'l1')}.csv"), dual)
    checked = check_pairs(instance, config.get("pairs", 0), config.seed) if config.get("pairs", 0) else 0
    emit(f"dualize\tballs={len(dual.balls)}\ttubes={len(dual.tubes)}\tpairs_checked={checked}")
    return EXIT_OK
