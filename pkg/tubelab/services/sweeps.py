"""Прогоны оценок по сетке параметров: измерение, правая часть, отношение и подгонка константы."""

import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from tubelab.config import settings
from tubelab.exceptions import ParameterError, SpacingViolation
from tubelab.services.constructions import (
    build_furst_sqrt2,
    build_position_family,
    grid_tubes,
    random_grid_balls,
)
from tubelab.services.duality import transfer_spacing
from tubelab.services.furstenberg import furstenberg_target, run_pipeline
from tubelab.services.geometry import Ball, Orientation, SpacingParams
from tubelab.services.incidence import rich_balls, rich_tubes, verify_ball_grid_spacing, verify_tube_spacing
from tubelab.utils import compare_power, format_rational, geometric_mean

logger = logging.getLogger(__name__)


class Theorem(str, Enum):
    main2 = "theorem-main2"
    main3 = "theorem-main3"
    main = "theorem-main"
    furstenberg = "furstenberg"


@dataclass(frozen=True)
class SweepCell:
    delta: Fraction
    W: int
    X: int
    r: int | None = None
    alpha: Fraction | None = None


@dataclass(frozen=True)
class SweepRow:
    cell: SweepCell
    measured: float
    bound: float
    ratio: float
    note: str = ""


@dataclass(frozen=True)
class SweepReport:
    theorem: Theorem
    rows: tuple[SweepRow, ...]
    epsilon: Fraction
    seed: int
    skipped: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ratios(self) -> list[float]:
        return [row.ratio for row in self.rows]

    @property
    def fitted_constant(self) -> float | None:
        """Среднее геометрическое отношений."""
        return geometric_mean(self.ratios) if self.rows else None

    @property
    def ratio_spread(self) -> float | None:
        return max(self.ratios) / min(self.ratios) if self.rows else None

    @property
    def drift(self) -> bool:
        """Отношение монотонно уходит с ростом δ⁻¹ сильнее, чем допускает множитель δ^{−ε}."""
        by_delta: dict[Fraction, list[float]] = defaultdict(list)
        for row in self.rows:
            by_delta[row.cell.delta].append(row.ratio)
        if len(by_delta) < 3:
            return False
        deltas = sorted(by_delta, reverse=True)
        means = np.array([geometric_mean(by_delta[d]) for d in deltas])
        steps = np.diff(means)
        monotone = bool(np.all(steps > 0) or np.all(steps < 0))
        allowance = float(1 / deltas[-1]) ** float(self.epsilon) / float(1 / deltas[0]) ** float(self.epsilon)
        return monotone and float(means.max() / means.min()) > allowance

    def to_tsv(self) -> str:
        lines = ["theorem\tdelta\tW\tX\tr\talpha\tmeasured\tbound\tratio\tnote"]
        for row in self.rows:
            c = row.cell
            lines.append(
                "\t".join(
                    [
                        self.theorem.value,
                        format_rational(c.delta),
                        str(c.W),
                        str(c.X),
                        "" if c.r is None else str(c.r),
                        "" if c.alpha is None else format_rational(c.alpha),
                        f"{row.measured:.6g}",
                        f"{row.bound:.6g}",
                        f"{row.ratio:.6g}",
                        row.note,
                    ]
                )
            )
        return "\n".join(lines) + "\n"


def rich_bound(count: int, W: int, X: int, r: int) -> float:
    """count·WX·r⁻²·(r⁻¹ + W⁻¹) без множителя C_ε·δ^{−ε}."""
    return count * W * X / (r * r) * (1 / r + 1 / W)


def hypothesis_holds(delta: Fraction, W: int, X: int, r: int, epsilon: Fraction) -> bool:
    """r > max(δ^{1−2ε}·WX, 1), точно."""
    return r > 1 and compare_power(Fraction(r, W * X), delta, 1 - 2 * epsilon) > 0


def _require_r(cell: SweepCell) -> int:
    if cell.r is None:
        raise ParameterError(f"Для ячейки {cell} нужно r")
    return cell.r


def _measure_main2(cell: SweepCell, *, jobs: int, **_) -> SweepRow:
    params = SpacingParams(cell.delta, Fraction(cell.W), Fraction(cell.X))
    tubes = grid_tubes(cell.delta, cell.W, cell.X)
    report = verify_tube_spacing(tubes, params)
    if not report.passed:
        raise SpacingViolation(_describe(cell), report)
    r = _require_r(cell)
    measured = len(rich_balls(tubes, r, delta=cell.delta, params=params, jobs=jobs))
    return _row(cell, measured, rich_bound(len(tubes), cell.W, cell.X, r))


def _measure_main3(cell: SweepCell, *, jobs: int, **_) -> SweepRow:
    params = SpacingParams(cell.delta, Fraction(cell.W), Fraction(cell.X))
    tubes = build_position_family(cell.delta, cell.W, cell.X)
    transfer = transfer_spacing(tubes, params, Orientation.v_long)
    if not transfer.passed:
        raise SpacingViolation(_describe(cell), transfer.report)
    r = _require_r(cell)
    measured = len(rich_balls(tubes, r, delta=cell.delta, params=params, jobs=jobs))
    return _row(cell, measured, rich_bound(len(tubes), cell.W, cell.X, r))


def _measure_main(cell: SweepCell, *, rng: np.random.Generator, plant_violation: bool = False, **_) -> SweepRow:
    params = SpacingParams(cell.delta, Fraction(cell.W), Fraction(cell.X))
    balls = list(random_grid_balls(params, rng))
    if plant_violation and balls:
        x, y = balls[0].center
        corner = (Fraction(math.floor(x * cell.W), cell.W), Fraction(math.floor(y * cell.X), cell.X))
        if corner == balls[0].center:
            corner = (corner[0] + Fraction(1, 2 * cell.W), corner[1] + Fraction(1, 2 * cell.X))
        balls.append(Ball(corner, cell.delta))
    report = verify_ball_grid_spacing(balls, params)
    if not report.passed:
        raise SpacingViolation(_describe(cell), report)
    r = _require_r(cell)
    measured = len(rich_tubes(balls, r, params=params))
    return _row(cell, measured, rich_bound(len(balls), cell.W, cell.X, r))


def _measure_furstenberg(cell: SweepCell, *, jobs: int, **_) -> SweepRow:
    if cell.alpha is None:
        raise ParameterError(f"Для ячейки {cell} нужно α")
    example = build_furst_sqrt2(cell.delta, cell.alpha, cell.X, cell.W)
    if example.spacing_report is not None and not example.spacing_report.passed:
        raise SpacingViolation(_describe(cell), example.spacing_report)
    result = run_pipeline(example, jobs=jobs)
    target = furstenberg_target(cell.delta, cell.alpha, cell.W, cell.X)
    note = ""
    if result.certificate is not None:
        note = f"L={result.certificate.lemma_value:.6g}"
    return _row(cell, len(example.balls), target, note)


def _row(cell: SweepCell, measured: float, bound: float, note: str = "") -> SweepRow:
    return SweepRow(cell=cell, measured=float(measured), bound=bound, ratio=measured / bound, note=note)


_MEASURES = {
    Theorem.main2: _measure_main2,
    Theorem.main3: _measure_main3,
    Theorem.main: _measure_main,
    Theorem.furstenberg: _measure_furstenberg,
}


def sweep_theorem(
    theorem: Theorem,
    cells: Iterable[SweepCell],
    *,
    epsilon: Fraction | None = None,
    seed: int | None = None,
    jobs: int = 1,
    plant_violation: bool = False,
) -> SweepReport:
    """Проходит сетку; ячейки вне гипотез теоремы и с нулевым измерением пропускаются с пометкой.

    Проверка разреженности идёт раньше сравнения с оценкой: нарушение прерывает прогон
    исключением SpacingViolation.
    """
    epsilon = settings.epsilon if epsilon is None else epsilon
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    measure = _MEASURES[theorem]
    rows: list[SweepRow] = []
    skipped: list[str] = []

    for cell in cells:
        if theorem is not Theorem.furstenberg:
            r = _require_r(cell)
            if not hypothesis_holds(cell.delta, cell.W, cell.X, r, epsilon):
                note = f"skip {_describe(cell)}: r ≤ max(δ^(1−2ε)·WX, 1)"
                logger.warning("Sweep %s: %s", theorem.value, note)
                skipped.append(note)
                continue
        try:
            row = measure(cell, rng=rng, jobs=jobs, plant_violation=plant_violation)
        except ParameterError as e:
            note = f"skip {_describe(cell)}: {e}"
            logger.warning("Sweep %s: %s", theorem.value, note)
            skipped.append(note)
            continue
        if row.measured <= 0:
            note = f"skip {_describe(cell)}: nothing measured"
            logger.warning("Sweep %s: %s", theorem.value, note)
            skipped.append(note)
            continue
        logger.debug("Sweep %s %s: ratio %.4g", theorem.value, _describe(cell), row.ratio)
        rows.append(row)

    report = SweepReport(theorem=theorem, rows=tuple(rows), epsilon=epsilon, seed=seed, skipped=tuple(skipped))
    logger.info(
        "Sweep %s: %d rows, %d skipped, constant=%s",
        theorem.value, len(rows), len(skipped), report.fitted_constant,
    )
    return report


def _describe(cell: SweepCell) -> str:
    parts = [f"delta={format_rational(cell.delta)}", f"W={cell.W}", f"X={cell.X}"]
    if cell.r is not None:
        parts.append(f"r={cell.r}")
    if cell.alpha is not None:
        parts.append(f"alpha={format_rational(cell.alpha)}")
    return " ".join(parts)


def grid_cells(
    deltas: Sequence[Fraction],
    Ws: Sequence[int],
    Xs: Sequence[int],
    rs: Sequence[int] = (),
    alphas: Sequence[Fraction] = (),
) -> list[SweepCell]:
    """Декартово произведение; пары с W > X или X > δ⁻¹ отбрасываются."""
    cells = []
    for delta in deltas:
        for W in Ws:
            for X in Xs:
                if W > X or X > 1 / delta:
                    continue
                for r in rs or (None,):
                    for alpha in alphas or (None,):
                        cells.append(SweepCell(delta=delta, W=W, X=X, r=r, alpha=alpha))
    return cells


