"""Общие типы аргументов и вывод результатов для команд."""

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from tubelab.exceptions import ParameterError
from tubelab.services.geometry import SpacingParams
from tubelab.utils import parse_rational

logger = logging.getLogger(__name__)


def rational(text: str) -> Fraction:
    """Тип аргумента: только `p/q` или целое, десятичные дроби отклоняются."""
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def rational_list(text: str) -> list[Fraction]:
    return [rational(part) for part in text.split(",") if part.strip()]


def int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Ожидался список целых через запятую: {text!r}") from e


def add_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--in", dest="input", type=Path, required=True, help="файл экземпляра CSV")


def add_shape(parser: argparse.ArgumentParser, *, r: bool = False, alpha: bool = False) -> None:
    parser.add_argument("--delta", type=rational, required=True, help="δ = 1/n")
    parser.add_argument("--W", dest="W", type=int, help="параметр W")
    parser.add_argument("--X", dest="X", type=int, help="параметр X")
    if r:
        parser.add_argument("--r", dest="r", type=int, help="порог богатства")
    if alpha:
        parser.add_argument("--alpha", type=rational, help="показатель α ∈ (0, 1)")


def output_path(out: Path, name: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    return out / name


def emit(text: str) -> None:
    """Печатает результат в stdout (журнал идёт в stderr)."""
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    sys.stdout.flush()


def need(config, *names: str) -> list:
    """Значения обязательных для подкоманды параметров."""
    missing = [name for name in names if config.params.get(name) is None]
    if missing:
        flags = ", ".join(f"--{name}" for name in missing)
        raise ParameterError(f"{config.verb}: нужны {flags}")
    return [config.params[name] for name in names]


def maybe_params(instance) -> SpacingParams | None:
    if instance.W is None or instance.X is None:
        return None
    return instance.params
