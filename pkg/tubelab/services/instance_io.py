import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from tubelab.config import settings
from tubelab.constants import INSTANCE_HEADER_KEYS, MAX_INSTANCE_LINE_LENGTH, MAX_INSTANCE_LINES
from tubelab.exceptions import InstanceFormatError, InstanceTooLarge, ParameterError
from tubelab.services.geometry import Ball, SpacingParams, Tube, Window, canonical_balls, canonical_tubes
from tubelab.utils import format_rational, parse_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Instance:
    delta: Fraction
    balls: tuple[Ball, ...] = ()
    tubes: tuple[Tube, ...] = ()
    W: Fraction | None = None
    X: Fraction | None = None
    K: int = field(default_factory=lambda: settings.rotation_count)

    @property
    def params(self) -> SpacingParams:
        if self.W is None or self.X is None:
            raise ParameterError("В заголовке экземпляра нет W и X")
        return SpacingParams(self.delta, self.W, self.X)


HEADER_RE = re.compile(r"^\s*(?P<key>[A-Za-z]+)\s*=\s*(?P<value>[^,]+?)\s*$")


def _parse_header(line: str) -> dict[str, str]:
    header: dict[str, str] = {}
    for part in line.split(","):
        match = HEADER_RE.match(part)
        if not match or match.group("key") not in INSTANCE_HEADER_KEYS:
            raise InstanceFormatError(f"Некорректный заголовок: {line!r}", [1])
        header[match.group("key")] = match.group("value")
    if "delta" not in header:
        raise InstanceFormatError("В заголовке нет delta", [1])
    return header


def _parse_row(fields: list[str], delta: Fraction, K: int) -> Ball | Tube:
    kind, values = fields[0], fields[1:]
    if kind == "B" and len(values) in (2, 3):
        window = Window(values[2]) if len(values) == 3 else Window.unit
        return Ball((parse_rational(values[0]), parse_rational(values[1])), delta, window)
    if kind == "T" and len(values) in (3, 4):
        window = Window(values[3]) if len(values) == 4 else Window.unit
        rotation = int(values[2])
        if rotation >= K:
            raise ValueError(f"Индекс поворота {rotation} вне [0, {K})")
        return Tube(parse_rational(values[0]), parse_rational(values[1]), delta, rotation, window)
    raise ValueError(f"Неизвестная строка {kind!r} с {len(values)} полями")


def parse_instance(text: str) -> Instance:
    """Разбирает CSV экземпляра; ошибочные строки собираются и сообщаются все сразу."""
    lines = text.splitlines()
    if len(lines) > MAX_INSTANCE_LINES:
        logger.warning("Instance too large: %d lines", len(lines))
        raise InstanceTooLarge(f"Строк в файле {len(lines)} > {MAX_INSTANCE_LINES}")
    if not lines or not lines[0].strip():
        raise InstanceFormatError("Пустой файл экземпляра", [1])

    header = _parse_header(lines[0])
    try:
        delta = parse_rational(header["delta"])
        W = parse_rational(header["W"]) if "W" in header else None
        X = parse_rational(header["X"]) if "X" in header else None
        K = int(header["K"]) if "K" in header else settings.rotation_count
    except ValueError as e:
        raise InstanceFormatError(f"Некорректный заголовок: {e}", [1]) from e
    if delta <= 0:
        raise InstanceFormatError(f"delta должно быть положительным: {delta}", [1])

    balls: list[Ball] = []
    tubes: list[Tube] = []
    invalid_lines: list[int] = []

    for number, raw_line in enumerate(lines[1:], start=2):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue

        if len(line) > MAX_INSTANCE_LINE_LENGTH:
            logger.debug("Line %d too long: %r", number, line[:100])
            raise InstanceTooLarge(f"Строка {number} длиннее {MAX_INSTANCE_LINE_LENGTH} символов")

        try:
            item = _parse_row([f.strip() for f in line.split(",")], delta, K)
        except (ValueError, ParameterError) as e:
            logger.debug("Invalid line %d: %r (%s)", number, raw_line, e)
            invalid_lines.append(number)
            continue

        if isinstance(item, Ball):
            balls.append(item)
        else:
            tubes.append(item)

    if invalid_lines:
        raise InstanceFormatError(f"Некорректных строк: {len(invalid_lines)}", invalid_lines)

    logger.debug("Parsed instance: %d balls, %d tubes, delta=%s", len(balls), len(tubes), delta)
    return Instance(delta=delta, balls=tuple(balls), tubes=tuple(tubes), W=W, X=X, K=K)


def read_instance(path: Path) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceFormatError(f"Не удалось прочитать {path}: {e}") from e
    return parse_instance(text)


def format_instance(instance: Instance) -> str:
    """Канонический CSV: шары и трубки в каноническом порядке, окно пишется только для dual."""
    header = [f"delta={format_rational(instance.delta)}"]
    if instance.W is not None and instance.X is not None:
        header += [f"W={format_rational(instance.W)}", f"X={format_rational(instance.X)}"]
    header.append(f"K={instance.K}")
    rows = [",".join(header)]
    for b in canonical_balls(instance.balls):
        row = f"B,{format_rational(b.center[0])},{format_rational(b.center[1])}"
        rows.append(row + (f",{b.window.value}" if b.window is Window.dual else ""))
    for t in canonical_tubes(instance.tubes):
        row = f"T,{format_rational(t.u)},{format_rational(t.v)},{t.rotation}"
        rows.append(row + (f",{t.window.value}" if t.window is Window.dual else ""))
    return "\n".join(rows) + "\n"


def write_instance(path: Path, instance: Instance) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_instance(instance), encoding="utf-8")
    logger.info("Wrote instance %s: %d balls, %d tubes", path, len(instance.balls), len(instance.tubes))
    return path
