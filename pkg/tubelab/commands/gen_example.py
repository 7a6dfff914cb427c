import logging
from fractions import Fraction
from typing import TYPE_CHECKING

from tubelab.commands.common import add_shape, emit, need, output_path
from tubelab.config import settings
from tubelab.constants import EXIT_OK
from tubelab.exceptions import SpacingViolation
from tubelab.services.constructions import (
    FurstenbergExample,
    SWindow,
    build_case1,
    build_case2,
    build_furst_intersected,
    build_furst_sqrt2,
    build_furst_strips,
    build_position_family,
)
from tubelab.services.duality import transfer_spacing
from tubelab.services.geometry import Orientation, SpacingParams
from tubelab.services.instance_io import Instance, write_instance
from tubelab.services.schemas import (
    BallModel,
    BushCertificate,
    Case1Certificate,
    FurstenbergCertificate,
    GridSpacingModel,
    TubeModel,
    WitnessEntry,
    WitnessFile,
    write_json,
)

if TYPE_CHECKING:
    from tubelab.cli import ExperimentConfig

logger = logging.getLogger(__name__)

TARGETS = ("st-case1", "st-case2", "furst-strips", "furst-intersected", "furst-sqrt2", "position")


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen-example", help="построить точный пример и его сертификат")
    parser.add_argument("target", choices=TARGETS)
    add_shape(parser, r=True, alpha=True)
    parser.add_argument("--min-solutions", type=int, help="минимум решений у богатой точки (st-case1)")
    parser.add_argument("--s-cap", type=int, help="q ≤ cap·X/r для множества S (st-case1)")
    parser.set_defaults(handler=handle)


def _write_furstenberg(config: "ExperimentConfig", example: FurstenbergExample) -> int:
    name = config.target
    W, X = example.params.integers() if example.params is not None else (None, None)
    instance = Instance(
        delta=example.delta,
        balls=example.balls,
        tubes=example.tubes,
        W=example.params.W if example.params is not None else None,
        X=example.params.X if example.params is not None else None,
        K=settings.rotation_count,
    )
    write_instance(output_path(config.out, f"{name}.csv"), instance)
    write_json(output_path(config.out, f"{name}.json"), FurstenbergCertificate.of(example))
    witnesses = WitnessFile(
        delta=example.delta,
        alpha=example.alpha,
        case=example.case,
        W=W,
        X=X,
        witnesses=[
            WitnessEntry(tube=TubeModel.of(t), balls=[BallModel.of(b) for b in balls])
            for t, balls in example.witnesses.items()
        ],
    )
    write_json(output_path(config.out, f"{name}.witnesses.json"), witnesses)
    emit(f"{name}\tcase={example.case}\tballs={len(example.balls)}\ttubes={len(example.tubes)}")
    if example.spacing_report is not None and not example.spacing_report.passed:
        raise SpacingViolation(f"{name}: семейство ρ не прошло проверку", example.spacing_report)
    return EXIT_OK


def handle(config: "ExperimentConfig") -> int:
    target = config.target
    delta = need(config, "delta")[0]
    logger.info("Generating %s example", target)

    if target == "st-case1":
        W, X, r = need(config, "W", "X", "r")
        window = SWindow.from_settings()
        if config.get("s_cap") is not None:
            window = SWindow(window.lower, window.upper, window.spread, config.get("s_cap"))
        example = build_case1(delta, W, X, r, window=window, min_solutions=config.get("min_solutions"))
        instance = Instance(delta, example.balls, example.tubes, example.params.W, example.params.X)
        write_instance(output_path(config.out, "st-case1.csv"), instance)
        write_json(output_path(config.out, "st-case1.json"), Case1Certificate.of(example))
        emit(f"st-case1\t|S|={len(example.fractions)}\tpoints={len(example.points)}\tratio={example.cardinality_ratio:.6g}")
        return EXIT_OK

    if target == "st-case2":
        W, X, r = need(config, "W", "X", "r")
        example = build_case2(delta, W, X, r)
        instance = Instance(delta, (), example.tubes, example.params.W, example.params.X)
        write_instance(output_path(config.out, "st-case2.csv"), instance)
        write_json(output_path(config.out, "st-case2.json"), BushCertificate.of(example))
        emit(f"st-case2\tapexes={len(example.apexes)}\ttubes={len(example.tubes)}")
        return EXIT_OK

    if target == "position":
        W, X = need(config, "W", "X")
        tubes = build_position_family(delta, W, X)
        params = SpacingParams(delta, Fraction(W), Fraction(X))
        transfer = transfer_spacing(tubes, params, Orientation.v_long)
        write_instance(output_path(config.out, "position.csv"), Instance(delta, (), tubes, params.W, params.X))
        write_json(output_path(config.out, "position.json"), GridSpacingModel.of_transfer(transfer))
        emit(f"position\ttubes={len(tubes)}\tpassed={transfer.passed}")
        if not transfer.passed:
            raise SpacingViolation("position: перенос разреженности не прошёл", transfer.report)
        return EXIT_OK

    alpha = need(config, "alpha")[0]
    if target == "furst-strips":
        return _write_furstenberg(config, build_furst_strips(delta, alpha))
    W, X = need(config, "W", "X")
    if target == "furst-intersected":
        return _write_furstenberg(config, build_furst_intersected(delta, alpha, W, X))
    return _write_furstenberg(config, build_furst_sqrt2(delta, alpha, X, W))
