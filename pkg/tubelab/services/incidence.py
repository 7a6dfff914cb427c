"""Подсчёт инцидентностей и r-богатых множеств двумя способами: перебором (оракул)
и сеточным движком с корзинами. Отчёты обоих движков обязаны совпадать.
"""

import logging
import math
from collections import Counter, defaultdict
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from tubelab.config import settings
from tubelab.constants import MSG_ENGINES_DISAGREE, RASTER_MARGIN_FACTOR
from tubelab.exceptions import InvariantViolation, ParameterError
from tubelab.services.geometry import (
    Ball,
    Orientation,
    Point,
    Rect,
    Segment,
    SpacingParams,
    Tube,
    canonical_balls,
    canonical_tubes,
    common_radius,
    dist_point_segment_sq,
    essentially_distinct,
    express_in_frame,
    first_frame,
    frame_rotation,
    frames_cover_all,
    incident,
    require_inverse_integer,
    require_rotations,
)

logger = logging.getLogger(__name__)


class Engine(str, Enum):
    oracle = "oracle"
    grid = "grid"
    both = "both"


@dataclass(frozen=True)
class IncidenceReport:
    """I(𝔹, 𝕋) со счётчиками по трубкам и шарам в каноническом порядке."""

    balls: tuple[Ball, ...]
    tubes: tuple[Tube, ...]
    ball_counts: tuple[int, ...]
    tube_counts: tuple[int, ...]
    total: int
    histogram: dict[int, int] = field(default_factory=dict)

    def ball_count(self, ball: Ball) -> int:
        return self.ball_counts[self.balls.index(ball)]


@dataclass(frozen=True)
class RichBallSet:
    r: int
    delta: Fraction
    members: tuple[Ball, ...]
    counts: tuple[int, ...]
    params: SpacingParams | None = None

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, ball: object) -> bool:
        return ball in self.members


@dataclass(frozen=True)
class RichTubeSet:
    r: int
    delta: Fraction
    net_spacing: Fraction
    members: tuple[Tube, ...]
    counts: tuple[int, ...]
    params: SpacingParams | None = None
    candidates: int = 0

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class TestTube:
    """Пробная W⁻¹-трубка: окно [bottom, bottom + width) при y = 0 и [top, top + width) при y = 1."""

    __test__ = False

    bottom: Fraction
    top: Fraction
    width: Fraction


@dataclass(frozen=True)
class SpacingIssue:
    kind: str  # "count" или "gap"
    test_tube: TestTube
    count: int
    min_gap: Fraction | None


@dataclass(frozen=True)
class TubeSpacingReport:
    passed: bool
    max_count: int
    min_gap: Fraction | None
    count_limit: int
    gap_limit: Fraction
    violations: tuple[SpacingIssue, ...]

    @property
    def worst(self) -> SpacingIssue | None:
        """Худшее нарушение: сначала по числу трубок, затем по зазору."""
        if not self.violations:
            return None
        counts = [v for v in self.violations if v.kind == "count"]
        if counts:
            return max(counts, key=lambda v: v.count)
        return min(self.violations, key=lambda v: v.min_gap if v.min_gap is not None else Fraction(0))


@dataclass(frozen=True)
class GridSpacingReport:
    passed: bool
    orientation: Orientation
    cells_used: int
    offending: Rect | None = None
    offending_count: int = 0


def _histogram(ball_counts: Iterable[int]) -> dict[int, int]:
    hist: Counter[int] = Counter()
    for c in ball_counts:
        if c > 0:
            hist[1 << (c.bit_length() - 1)] += 1
    return dict(sorted(hist.items()))


def _build_report(balls: Sequence[Ball], tubes: Sequence[Tube], ball_counts, tube_counts) -> IncidenceReport:
    total = sum(tube_counts)
    if total != sum(ball_counts):
        raise InvariantViolation("Сумма по шарам не равна сумме по трубкам")
    return IncidenceReport(
        balls=tuple(balls),
        tubes=tuple(tubes),
        ball_counts=tuple(ball_counts),
        tube_counts=tuple(tube_counts),
        total=total,
        histogram=_histogram(ball_counts),
    )


def count_incidences_oracle(
    balls: Iterable[Ball], tubes: Iterable[Tube], K: int | None = None
) -> IncidenceReport:
    """Полный перебор |𝔹|·|𝕋| пар через geometry.incident."""
    bs = canonical_balls(balls)
    ts = canonical_tubes(tubes)
    common_radius(bs, ts)
    K = require_rotations(ts, K)
    ball_counts = [0] * len(bs)
    tube_counts = [0] * len(ts)
    for j, tube in enumerate(ts):
        for i, ball in enumerate(bs):
            if incident(ball, tube, K):
                ball_counts[i] += 1
                tube_counts[j] += 1
    return _build_report(bs, ts, ball_counts, tube_counts)


class _TubeMatcher:
    """Предвычисленные данные трубки для быстрых точных проверок точек."""

    __slots__ = ("limit_sq", "rotation", "segment")

    def __init__(self, tube: Tube, K: int | None = None):
        self.segment = tube.frame_segment()
        self.rotation = frame_rotation(tube.rotation, K) if tube.rotation else None
        self.limit_sq = 4 * tube.radius * tube.radius

    def hits(self, center: Point) -> bool:
        if self.segment is None:
            return False
        if self.rotation is not None:
            center = self.rotation.inverse(center)
        return dist_point_segment_sq(center, self.segment) <= self.limit_sq


def cells_near_segment(seg: Segment, cell: Fraction, margin: Fraction) -> Iterator[tuple[int, int]]:
    """Клетки сетки шага cell, содержащие все точки на расстоянии ≤ margin − cell от отрезка.

    Обход по главной оси: в каждой полосе берётся диапазон побочной координаты
    отрезка над полосой, расширенной на margin, и сам диапазон расширяется на margin.
    """
    (ax, ay), (bx, by) = seg
    x_major = abs(bx - ax) >= abs(by - ay)
    if x_major:
        a_maj, a_min, b_maj, b_min = ax, ay, bx, by
    else:
        a_maj, a_min, b_maj, b_min = ay, ax, by, bx
    if a_maj > b_maj:
        a_maj, a_min, b_maj, b_min = b_maj, b_min, a_maj, a_min
    span = b_maj - a_maj
    first = math.floor((a_maj - margin) / cell)
    last = math.floor((b_maj + margin) / cell)
    for i in range(first, last + 1):
        lo = max(a_maj, i * cell - margin)
        hi = min(b_maj, (i + 1) * cell + margin)
        if lo > hi:
            continue
        if span == 0:
            m0 = m1 = a_min
        else:
            m0 = a_min + (b_min - a_min) * (lo - a_maj) / span
            m1 = a_min + (b_min - a_min) * (hi - a_maj) / span
            if m0 > m1:
                m0, m1 = m1, m0
        for j in range(math.floor((m0 - margin) / cell), math.floor((m1 + margin) / cell) + 1):
            yield (i, j) if x_major else (j, i)


def _bucket(balls: Sequence[Ball], cell: Fraction) -> dict[tuple[int, int], list[int]]:
    buckets: dict[tuple[int, int], list[int]] = defaultdict(list)
    for idx, ball in enumerate(balls):
        buckets[(math.floor(ball.center[0] / cell), math.floor(ball.center[1] / cell))].append(idx)
    return buckets


def _grid_chunk(
    balls: Sequence[Ball], tubes: Sequence[Tube], delta: Fraction, K: int
) -> tuple[list[int], list[int]]:
    buckets = _bucket(balls, delta)
    margin = RASTER_MARGIN_FACTOR * delta
    ball_counts = [0] * len(balls)
    tube_counts = [0] * len(tubes)
    for j, tube in enumerate(tubes):
        seg = tube.core_segment(K)
        if seg is None:
            continue
        matcher = _TubeMatcher(tube, K)
        for key in cells_near_segment(seg, delta, margin):
            for idx in buckets.get(key, ()):
                if matcher.hits(balls[idx].center):
                    ball_counts[idx] += 1
                    tube_counts[j] += 1
    return ball_counts, tube_counts


def _chunks(items: Sequence, jobs: int) -> list[Sequence]:
    size = max(1, math.ceil(len(items) / jobs))
    return [items[i : i + size] for i in range(0, len(items), size)]


def count_incidences_grid(
    balls: Iterable[Ball], tubes: Iterable[Tube], jobs: int = 1, K: int | None = None
) -> IncidenceReport:
    """Тот же отчёт, что у оракула, через корзины δ-клеток и консервативную растеризацию."""
    bs = canonical_balls(balls)
    ts = canonical_tubes(tubes)
    delta = common_radius(bs, ts)
    K = require_rotations(ts, K)
    if delta is None or not bs or not ts:
        return _build_report(bs, ts, [0] * len(bs), [0] * len(ts))

    if jobs <= 1 or len(ts) < 2:
        ball_counts, tube_counts = _grid_chunk(bs, ts, delta, K)
    else:
        ball_counts = [0] * len(bs)
        tube_counts = []
        chunks = _chunks(ts, jobs)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_grid_chunk, [bs] * len(chunks), chunks, [delta] * len(chunks), [K] * len(chunks))
            for partial_balls, partial_tubes in results:
                ball_counts = [a + b for a, b in zip(ball_counts, partial_balls, strict=True)]
                tube_counts.extend(partial_tubes)
    return _build_report(bs, ts, ball_counts, tube_counts)


def count_incidences(
    balls: Iterable[Ball],
    tubes: Iterable[Tube],
    engine: Engine = Engine.grid,
    jobs: int = 1,
    K: int | None = None,
) -> IncidenceReport:
    """K - число систем поворота, в которых записаны трубки (из заголовка экземпляра)."""
    balls, tubes = list(balls), list(tubes)
    if engine is Engine.oracle:
        return count_incidences_oracle(balls, tubes, K)
    if engine is Engine.grid:
        return count_incidences_grid(balls, tubes, jobs=jobs, K=K)
    oracle = count_incidences_oracle(balls, tubes, K)
    grid = count_incidences_grid(balls, tubes, jobs=jobs, K=K)
    if oracle != grid:
        logger.error("Engine mismatch: oracle total=%d grid total=%d", oracle.total, grid.total)
        raise InvariantViolation(MSG_ENGINES_DISAGREE)
    return oracle


def _lattice_counts(
    tubes: Sequence[Tube], delta: Fraction, step: Fraction, m: int, K: int
) -> Counter[tuple[int, int]]:
    """Число трубок у каждой точки решётки step·ℤ² ∩ [0,1]², без материализации решётки."""
    margin = RASTER_MARGIN_FACTOR * delta
    counts: Counter[tuple[int, int]] = Counter()
    for tube in tubes:
        seg = tube.core_segment(K)
        if seg is None:
            continue
        matcher = _TubeMatcher(tube, K)
        for ci, cj in cells_near_segment(seg, delta, margin):
            i_lo = max(0, math.ceil(ci * delta / step))
            i_hi = min(m, math.ceil((ci + 1) * delta / step) - 1)
            j_lo = max(0, math.ceil(cj * delta / step))
            j_hi = min(m, math.ceil((cj + 1) * delta / step) - 1)
            for i in range(i_lo, i_hi + 1):
                for j in range(j_lo, j_hi + 1):
                    if matcher.hits((i * step, j * step)):
                        counts[(i, j)] += 1
    return counts


def rich_balls(
    tubes: Iterable[Tube],
    r: int,
    *,
    delta: Fraction | None = None,
    step: Fraction | None = None,
    params: SpacingParams | None = None,
    jobs: int = 1,
    K: int | None = None,
) -> RichBallSet:
    """B_r(𝕋): шары решётки, пересекающие не меньше r трубок."""
    if r < 1:
        raise ParameterError(f"r должно быть ≥ 1, получено {r}")
    ts = canonical_tubes(tubes)
    found = common_radius([], ts)
    delta = delta if delta is not None else found
    if delta is None:
        raise ParameterError("Пустое семейство трубок: укажите δ")
    if found is not None and found != delta:
        raise ParameterError(f"δ трубок {found} не совпадает с {delta}")
    require_inverse_integer(delta)
    step = delta / 2 if step is None else step
    m = require_inverse_integer(step)
    K = require_rotations(ts, K)

    if jobs <= 1 or len(ts) < 2:
        counts = _lattice_counts(ts, delta, step, m, K)
    else:
        counts = Counter()
        chunks = _chunks(ts, jobs)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            n = len(chunks)
            for part in pool.map(_lattice_counts, chunks, [delta] * n, [step] * n, [m] * n, [K] * n):
                counts.update(part)

    rich = sorted((key for key, c in counts.items() if c >= r))
    members = tuple(Ball((i * step, j * step), delta) for i, j in rich)
    logger.info("Rich balls: r=%d, %d tubes, %d members", r, len(ts), len(members))
    return RichBallSet(
        r=r,
        delta=delta,
        members=members,
        counts=tuple(counts[key] for key in rich),
        params=params,
    )


def _net_range(lo: Fraction, hi: Fraction, s: Fraction) -> range:
    return range(math.ceil(lo / s), math.floor(hi / s) + 1)


def rich_tubes(
    balls: Iterable[Ball],
    r: int,
    net_spacing: Fraction | None = None,
    *,
    K: int | None = None,
    params: SpacingParams | None = None,
) -> RichTubeSet:
    """T_r(𝔹): трубки максимального существенно различного семейства, пересекающие ≥ r шаров.

    Сеть кандидатов: u ∈ s·ℤ ∩ [−1, 2], v ∈ s·ℤ ∩ [−1, 1] в каждой системе поворота,
    только направления, для которых эта система - первая покрывающая. Подсчёт
    консервативный (|x′ − u − v·y′| ≤ 3δ), затем точное подтверждение и жадное прореживание.
    """
    if r < 1:
        raise ParameterError(f"r должно быть ≥ 1, получено {r}")
    bs = canonical_balls(balls)
    delta = common_radius(bs, [])
    if delta is None:
        return RichTubeSet(r=r, delta=Fraction(0), net_spacing=net_spacing or Fraction(0), members=(), counts=())
    s = delta / 2 if net_spacing is None else net_spacing
    if s <= 0 or s > delta / 2:
        raise ParameterError(f"Шаг сети {s} больше δ/2 = {delta / 2}: сеть не максимальна")
    K = K if K is not None else settings.rotation_count

    reach = RASTER_MARGIN_FACTOR * delta
    u_range = _net_range(Fraction(-1), Fraction(2), s)
    v_range = _net_range(Fraction(-1), Fraction(1), s)
    confirmed: list[tuple[int, Tube]] = []
    candidates = 0

    for k in range(K):
        if k and frames_cover_all(k, K):
            break
        rot = frame_rotation(k, K)
        centers = [rot.inverse(b.center) if k else b.center for b in bs]
        for j in v_range:
            v = j * s
            if k and first_frame(rot.apply_vector((v, Fraction(1))), K) != k:
                continue
            hits: dict[int, list[int]] = defaultdict(list)
            for idx, (x, y) in enumerate(centers):
                c = x - v * y
                lo = max(u_range.start, math.ceil((c - reach) / s))
                hi = min(u_range.stop - 1, math.floor((c + reach) / s))
                for i in range(lo, hi + 1):
                    hits[i].append(idx)
            for i, idxs in hits.items():
                if len(idxs) < r:
                    continue
                candidates += 1
                tube = Tube(i * s, v, delta, k)
                exact = sum(1 for idx in idxs if incident(bs[idx], tube, K))
                if exact >= r:
                    confirmed.append((exact, tube))

    confirmed.sort(key=lambda item: (-item[0], item[1].sort_key))
    kept = _thin(confirmed, delta, K)
    kept.sort(key=lambda item: item[1].sort_key)
    logger.info("Rich tubes: r=%d, %d candidates, %d confirmed, %d kept", r, candidates, len(confirmed), len(kept))
    return RichTubeSet(
        r=r,
        delta=delta,
        net_spacing=s,
        members=tuple(t for _, t in kept),
        counts=tuple(c for c, _ in kept),
        params=params,
        candidates=candidates,
    )


def _thin(ordered: list[tuple[int, Tube]], delta: Fraction, K: int) -> list[tuple[int, Tube]]:
    """Жадно оставляет трубки, существенно отличные от уже оставленных.

    Несущественно различные трубки одной системы лежат в соседних корзинах
    (⌊u/δ⌋, ⌊(u+v)/δ⌋); трубки соседних систем сравниваются через пересчёт координат.
    """
    frames = sorted({t.rotation for _, t in ordered})
    neighbours: dict[int, set[int]] = {}
    for pos, k in enumerate(frames):
        neighbours[k] = {k, frames[pos - 1], frames[(pos + 1) % len(frames)]}

    buckets: dict[tuple[int, int, int], list[Tube]] = defaultdict(list)
    kept: list[tuple[int, Tube]] = []
    for count, tube in ordered:
        clash = False
        for k in neighbours.get(tube.rotation, {tube.rotation}):
            coords = express_in_frame(tube, k, K)
            if coords is None:
                continue
            u, v = coords
            bu, bt = math.floor(u / delta), math.floor((u + v) / delta)
            for du in (-1, 0, 1):
                for dt in (-1, 0, 1):
                    for other in buckets.get((k, bu + du, bt + dt), ()):
                        if not essentially_distinct(other, tube, K):
                            clash = True
                            break
                    if clash:
                        break
                if clash:
                    break
            if clash:
                break
        if clash:
            continue
        kept.append((count, tube))
        buckets[(tube.rotation, math.floor(tube.u / delta), math.floor((tube.u + tube.v) / delta))].append(tube)
    return kept


def verify_tube_spacing(tubes: Iterable[Tube], params: SpacingParams, *, slack: int = 1) -> TubeSpacingReport:
    """Проверка условия теоремы о (W, X)-разреженности трубок на сети пробных W⁻¹-трубок.

    Пробные трубки - окна ширины W⁻¹ при y = 0 и y = 1 с началами на сетке (2W)⁻¹.
    Проходит, если в каждой ≤ slack·⌈X/W⌉ трубок и их направления разнесены на ≥ 1/(slack·X).
    """
    ts = canonical_tubes(tubes)
    if len({t.rotation for t in ts}) > 1:
        raise ParameterError("Трубки должны иметь общий индекс поворота")
    width = 1 / params.W
    half = width / 2
    count_limit = slack * math.ceil(params.X / params.W)
    gap_limit = 1 / (slack * params.X)

    windows: dict[tuple[int, int], list[Tube]] = defaultdict(list)
    for tube in ts:
        a = math.floor(tube.u / half)
        b = math.floor((tube.u + tube.v) / half)
        for da in (0, -1):
            for db in (0, -1):
                windows[(a + da, b + db)].append(tube)

    violations: list[SpacingIssue] = []
    max_count = 0
    min_gap: Fraction | None = None
    for (a, b), members in sorted(windows.items()):
        test = TestTube(bottom=a * half, top=b * half, width=width)
        count = len(members)
        max_count = max(max_count, count)
        directions = sorted(t.v for t in members)
        gaps = [q - p for p, q in zip(directions, directions[1:], strict=False)]
        local_gap = min(gaps) if gaps else None
        if local_gap is not None and (min_gap is None or local_gap < min_gap):
            min_gap = local_gap
        if count > count_limit:
            violations.append(SpacingIssue("count", test, count, local_gap))
        if local_gap is not None and local_gap < gap_limit:
            violations.append(SpacingIssue("gap", test, count, local_gap))

    if violations:
        logger.info("Tube spacing failed: %d violations, max count %d", len(violations), max_count)
    return TubeSpacingReport(
        passed=not violations,
        max_count=max_count,
        min_gap=min_gap,
        count_limit=count_limit,
        gap_limit=gap_limit,
        violations=tuple(violations),
    )


def cell_shape(params: SpacingParams, orientation: Orientation) -> tuple[Fraction, Fraction]:
    """(ширина, высота) клетки: длинная сторона W⁻¹ вдоль оси u или вдоль оси v."""
    if orientation is Orientation.u_long:
        return 1 / params.W, 1 / params.X
    return 1 / params.X, 1 / params.W


def verify_ball_grid_spacing(
    balls: Iterable[Ball], params: SpacingParams, orientation: Orientation = Orientation.u_long
) -> GridSpacingReport:
    """Не больше одного шара (по центру) в каждой полуоткрытой клетке W⁻¹ × X⁻¹."""
    width, height = cell_shape(params, orientation)
    cells: Counter[tuple[int, int]] = Counter()
    for ball in balls:
        cells[(math.floor(ball.center[0] / width), math.floor(ball.center[1] / height))] += 1
    crowded = sorted(key for key, c in cells.items() if c > 1)
    if not crowded:
        return GridSpacingReport(passed=True, orientation=orientation, cells_used=len(cells))
    i, j = crowded[0]
    rect = Rect((i * width, j * height), width, height, orientation)
    logger.info("Grid spacing failed: %d crowded cells, first at %s", len(crowded), rect.lower_left)
    return GridSpacingReport(
        passed=False,
        orientation=orientation,
        cells_used=len(cells),
        offending=rect,
        offending_count=cells[(i, j)],
    )


def count_triples(balls: Iterable[Ball], tubes: Iterable[Tube], engine: Engine = Engine.grid) -> int:
    """Число упорядоченных троек (B₁, B₂, T), B₁ ≠ B₂, оба шара пересекают T."""
    report = count_incidences(balls, tubes, engine=engine)
    return sum(n * (n - 1) for n in report.tube_counts)


def triple_bound_ratio(balls: Sequence[Ball], tubes: Sequence[Tube], params: SpacingParams) -> float:
    """count_triples / ((log X)·|𝔹|·W·X); при X = 1 логарифм заменяется на 1."""
    triples = count_triples(balls, tubes)
    log_x = max(math.log(float(params.X)), 1.0)
    return triples / (log_x * len(balls) * float(params.W * params.X))
