import logging
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING

from tubelab.commands.common import emit, output_path, rational
from tubelab.constants import EXIT_OK
from tubelab.exceptions import InstanceFormatError
from tubelab.services.constructions import FurstenbergExample
from tubelab.services.furstenberg import run_pipeline
from tubelab.services.geometry import Ball, SpacingParams, Tube
from tubelab.services.schemas import PipelineModel, WitnessFile, read_witnesses, write_json

if TYPE_CHECKING:
    from tubelab.cli import ExperimentConfig

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("furst-bound", help="нижняя оценка |𝔹| через граф пересечений")
    parser.add_argument("--in", dest="input", type=Path, required=True, help="JSON со свидетелями Y(T)")
    parser.add_argument("--alpha", type=rational, help="α, по умолчанию из файла")
    parser.set_defaults(handler=handle)


def example_from_witnesses(data: WitnessFile) -> FurstenbergExample:
    """Экземпляр Фурстенберга из файла: трубки и их Y(T), 𝔹 - объединение свидетелей."""
    delta = data.delta
    witnesses: dict[Tube, tuple[Ball, ...]] = {}
    for entry in data.witnesses:
        tube = Tube(entry.tube.u, entry.tube.v, delta, entry.tube.k)
        balls = tuple(sorted((Ball((b.x, b.y), delta) for b in entry.balls), key=lambda b: b.center[1]))
        witnesses[tube] = balls
    balls = tuple(sorted({b for ys in witnesses.values() for b in ys}, key=lambda b: b.sort_key))
    params = None
    if data.W is not None and data.X is not None:
        params = SpacingParams(delta, Fraction(data.W), Fraction(data.X))
    return FurstenbergExample(
        case=data.case,
        delta=delta,
        alpha=data.alpha,
        intervals=(),
        tubes=tuple(witnesses),
        balls=balls,
        witnesses=witnesses,
        params=params,
    )


def handle(config: "ExperimentConfig") -> int:
    try:
        data = read_witnesses(config.input)
    except (OSError, ValueError) as e:
        raise InstanceFormatError(f"{config.input}: {e}") from e
    example = example_from_witnesses(data)
    result = run_pipeline(example, alpha=config.get("alpha"), jobs=config.jobs)
    write_json(output_path(config.out, "furst-bound.json"), PipelineModel.of(result))

    cert = result.certificate
    if cert is None:
        emit(f"furst-bound\tT'={result.typical_size}\tedges=0\tnotes={'; '.join(result.notes)}")
    else:
        emit(
            f"furst-bound\tT'={result.typical_size}\td={result.d}\tV={cert.vertices}\tE={cert.edges}"
            f"\tcr<={cert.cr_ub}\tlemma={cert.lemma_value:.6g}\tballs={cert.balls}"
        )
    return EXIT_OK
