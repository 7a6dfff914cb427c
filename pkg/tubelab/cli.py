"""Командная строка: разбор аргументов, проверка параметров и коды возврата."""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from tubelab import __version__
from tubelab.commands import (
    count,
    dualize,
    furst_bound,
    gen_example,
    report,
    rich,
    sweep,
    transfer_check,
    verify_spacing,
)
from tubelab.config import settings
from tubelab.constants import (
    EXIT_PARAMETER_ERROR,
    EXIT_VERIFICATION_FAILED,
    HELP_TEXT,
    MSG_INFEASIBLE,
    MSG_INSTANCE_ERROR,
    MSG_INVARIANT_FAILED,
    MSG_PARAMETER_ERROR,
    MSG_SPACING_FAILED,
)
from tubelab.exceptions import (
    InfeasibleParameters,
    InstanceFormatError,
    InstanceTooLarge,
    InvariantViolation,
    ParameterError,
    SpacingViolation,
)
from tubelab.services.geometry import require_inverse_integer

logger = logging.getLogger(__name__)

Handler = Callable[["ExperimentConfig"], int]

VERBS = (gen_example, count, rich, verify_spacing, dualize, transfer_check, furst_bound, sweep, report)


@dataclass(frozen=True)
class ExperimentConfig:
    verb: str
    target: str | None = None
    params: dict[str, object] = field(default_factory=dict)
    input: Path | None = None
    out: Path = Path("out")
    jobs: int = 1
    seed: int = 0

    def get(self, name: str, default: object = None):
        value = self.params.get(name)
        return default if value is None else value

    def validate(self) -> None:
        """Общие предусловия: δ = 1/n, целые W ≤ X ≤ δ⁻¹, r ≥ 1, 0 < α < 1, ε ∈ (0, 1)."""
        if self.jobs < 1:
            raise ParameterError(f"--jobs должно быть ≥ 1, получено {self.jobs}")
        delta = self.params.get("delta")
        if delta is not None:
            require_inverse_integer(delta)
        W, X = self.params.get("W"), self.params.get("X")
        for name, value in (("W", W), ("X", X), ("r", self.params.get("r"))):
            if value is not None and value < 1:
                raise ParameterError(f"--{name} должно быть ≥ 1, получено {value}")
        if W is not None and X is not None and W > X:
            raise ParameterError(f"Нужно W ≤ X: W={W}, X={X}")
        if X is not None and delta is not None and X > 1 / delta:
            raise ParameterError(f"Нужно X ≤ δ⁻¹: X={X}, δ={delta}")
        alpha = self.params.get("alpha")
        if alpha is not None and not 0 < alpha < 1:
            raise ParameterError(f"Нужно 0 < α < 1, получено {alpha}")
        epsilon = self.params.get("epsilon")
        if epsilon is not None and not 0 < epsilon < 1:
            raise ParameterError(f"Нужно 0 < ε < 1, получено {epsilon}")

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "ExperimentConfig":
        reserved = {"verb", "target", "input", "out", "jobs", "seed", "handler"}
        params = {k: v for k, v in vars(ns).items() if k not in reserved}
        return cls(
            verb=ns.verb,
            target=getattr(ns, "target", None),
            params=params,
            input=getattr(ns, "input", None),
            out=ns.out,
            jobs=ns.jobs,
            seed=ns.seed,
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tubelab",
        description="Эксперименты с δ-шарами и δ-трубками: примеры, подсчёты, двойственность, оценки.",
        epilog=HELP_TEXT,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--jobs", type=int, default=settings.jobs, help="число процессов")
    parser.add_argument("--seed", type=int, default=settings.seed, help="зерно PCG64")
    parser.add_argument("--out", type=Path, default=settings.output_dir, help="каталог результатов")
    subparsers = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    for module in VERBS:
        module.register(subparsers)
    return parser


def _report_error(message: str) -> None:
    print(message, file=sys.stderr)


def run(argv: Sequence[str] | None = None) -> int:
    """Выполняет команду и возвращает код возврата: 0 - успех, 1 - проверка не прошла, 2 - ошибка параметров."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        # --help и --version завершаются с 0, ошибки разбора с 2
        return int(e.code or 0)

    config = ExperimentConfig.from_namespace(ns)
    handler: Handler = ns.handler
    logger.debug("Running %s %s with %s", config.verb, config.target or "", config.params)

    try:
        config.validate()
        return handler(config)
    except (InstanceFormatError, InstanceTooLarge) as e:
        lines = getattr(e, "line_numbers", None)
        suffix = f" (строки {', '.join(map(str, lines))})" if lines else ""
        _report_error(MSG_INSTANCE_ERROR + str(e) + suffix)
        return EXIT_PARAMETER_ERROR
    except ParameterError as e:
        _report_error(MSG_PARAMETER_ERROR + str(e))
        return EXIT_PARAMETER_ERROR
    except SpacingViolation as e:
        logger.error("Spacing verification failed: %s", e)
        _report_error(MSG_SPACING_FAILED + str(e))
        return EXIT_VERIFICATION_FAILED
    except InvariantViolation as e:
        logger.error("Invariant violated: %s", e)
        _report_error(MSG_INVARIANT_FAILED + str(e))
        return EXIT_VERIFICATION_FAILED
    except InfeasibleParameters as e:
        _report_error(MSG_INFEASIBLE + str(e))
        return EXIT_VERIFICATION_FAILED

