"""Оценка множеств Фурстенберга через граф пересечений.

Псевдотрубки (по одному квадрату решётки δ на строку), статистика зазоров Y′(T)
с двоичными классами, граф пересечений с кратностями рёбер, верхняя оценка числа
пересечений и нижняя оценка по лемме о числе пересечений.
"""

import logging
import math
from collections import Counter, defaultdict
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx
import numpy as np

from tubelab.config import settings
from tubelab.constants import (
    CROSSING_LEMMA_CONSTANT,
    FURSTENBERG_LOG_EXPONENT,
    NEAR_VERTICAL_SLOPE,
    TYPICAL_GAP_FACTOR,
)
from tubelab.exceptions import InfeasibleParameters, InvariantViolation, ParameterError
from tubelab.services.constructions import FurstenbergExample
from tubelab.services.geometry import Ball, Point, SpacingParams, Tube, require_inverse_integer
from tubelab.utils import compare_power, dyadic_floor, log_inverse, power_float

logger = logging.getLogger(__name__)

Square = tuple[int, int]  # (столбец, строка)


@dataclass(frozen=True)
class PseudoTube:
    """Растеризация почти вертикальной прямой: ровно один квадрат в каждой строке."""

    tube: Tube
    delta: Fraction
    columns: tuple[int, ...]

    @property
    def squares(self) -> tuple[Square, ...]:
        return tuple((col, row) for row, col in enumerate(self.columns))

    def contains(self, square: Square) -> bool:
        col, row = square
        return 0 <= row < len(self.columns) and self.columns[row] == col


@dataclass(frozen=True)
class GapProfile:
    pseudo: PseudoTube
    squares: tuple[Square, ...]
    gaps: tuple[Fraction, ...]
    classes: dict[Fraction, tuple[int, ...]] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return len(self.squares) <= 1

    @property
    def total_gap(self) -> Fraction:
        return sum(self.gaps, Fraction(0))


@dataclass(frozen=True)
class GapSelection:
    d: Fraction | None
    size: int
    achieved: float
    threshold: Fraction
    ok: bool


@dataclass(frozen=True)
class CrossGraph:
    """Прямолинейный рисунок: вершины - центры квадратов, рёбра - соседние пары Y(T)."""

    graph: nx.Graph

    @property
    def vertex_count(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    def multiplicity(self, p: Point, q: Point) -> int:
        return len(self.graph.edges[p, q]["tubes"])

    @property
    def multiplicity_sum(self) -> int:
        return sum(len(tubes) for _, _, tubes in self.graph.edges(data="tubes"))

    def segments(self) -> list[tuple[Point, Point]]:
        return sorted(tuple(sorted(e)) for e in self.graph.edges())


@dataclass(frozen=True)
class CrossingBound:
    drawing_crossings: int
    pair_bound: int

    @property
    def cr_ub(self) -> int:
        return min(self.drawing_crossings, self.pair_bound)


@dataclass(frozen=True)
class RegimeBounds:
    """Три члена оценки, «главный враг» δ^{−2α}·W и итоговая цель."""

    incidence_term: float  # min(δ^{−α−1}, δ^{−α}·XW)
    sqrt_term: float  # δ^{−3α/2}·(XW)^{1/2}
    enemy_term: float  # δ^{−2α}·W
    target: float


@dataclass(frozen=True)
class BoundCertificate:
    balls: int
    vertices: int
    edges: int
    drawing_crossings: int
    pair_bound: int
    cr_ub: int
    lemma_value: float
    vertex_ratio: float
    target: float | None = None
    log_factor: float | None = None
    target_ratio: float | None = None
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class ReducedParams:
    X: int
    W: int
    target: float

    @property
    def product(self) -> int:
        return self.X * self.W


@dataclass(frozen=True)
class EdgeCountCertificate:
    case: int
    edges: Fraction | None = None
    edge_ratio: float | None = None
    key_constant: float | None = None
    angular: dict[Fraction, int] = field(default_factory=dict)
    angular_constant: float | None = None
    reduced: ReducedParams | None = None


@dataclass(frozen=True)
class PipelineResult:
    family_size: int
    typical_size: int
    d: Fraction | None
    graph: CrossGraph
    crossings: CrossingBound
    certificate: BoundCertificate | None
    edge_count: EdgeCountCertificate | None
    regimes: RegimeBounds | None
    notes: tuple[str, ...] = ()


# =============================================================================
# Псевдотрубки и зазоры
# =============================================================================


def near_vertical(tubes: Iterable[Tube]) -> list[Tube]:
    """Трубки физической системы с углом к оси y не больше 1/10 (|v| ≤ 1/10)."""
    return [t for t in tubes if t.rotation == 0 and abs(t.v) <= NEAR_VERTICAL_SLOPE]


def rasterize(tube: Tube, delta: Fraction) -> PseudoTube:
    """В строке j берётся самый левый замкнутый квадрат, который задевает осевая прямая."""
    n = require_inverse_integer(delta)
    if tube.rotation != 0 or abs(tube.v) > NEAR_VERTICAL_SLOPE:
        raise ParameterError(f"Псевдотрубка нужна для |v| ≤ {NEAR_VERTICAL_SLOPE}, получено v={tube.v}")
    columns = []
    for j in range(n):
        x0, x1 = tube.x_at(j * delta), tube.x_at((j + 1) * delta)
        x_lo, x_hi = min(x0, x1), max(x0, x1)
        if x_hi < 0 or x_lo > 1:
            raise ParameterError(f"Прямая x = {tube.u} + {tube.v}·y выходит из [0, 1] в строке {j}")
        col = math.ceil(x_lo / delta) - 1
        columns.append(min(max(col, 0), n - 1))
    return PseudoTube(tube=tube, delta=delta, columns=tuple(columns))


def _rasterize_many(tubes: Sequence[Tube], delta: Fraction, jobs: int) -> list[PseudoTube]:
    if jobs <= 1 or len(tubes) < 2:
        return [rasterize(t, delta) for t in tubes]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(rasterize, tubes, [delta] * len(tubes), chunksize=max(1, len(tubes) // jobs)))


def square_center(square: Square, delta: Fraction) -> Point:
    col, row = square
    return (col + Fraction(1, 2)) * delta, (row + Fraction(1, 2)) * delta


def square_of(point: Point, delta: Fraction) -> Square:
    """Нижний левый замкнутый квадрат решётки δ, содержащий точку (как у rasterize)."""
    n = require_inverse_integer(delta)
    col = min(max(math.ceil(point[0] / delta) - 1, 0), n - 1)
    row = min(max(math.ceil(point[1] / delta) - 1, 0), n - 1)
    return col, row


def ball_squares(balls: Iterable[Ball], delta: Fraction) -> set[Square]:
    """Растеризация 𝔹: у каждого шара ровно один квадрат, поэтому квадратов не больше |𝔹|."""
    return {square_of(b.center, delta) for b in balls}


def squares_from_balls(
    pseudo: PseudoTube, owned: set[Square], witnesses: Iterable[Ball | Point] | None = None
) -> tuple[Square, ...]:
    """Y′(T): квадраты псевдотрубки, в которых лежит шар 𝔹, снизу вверх.

    Если заданы свидетели Y(T), берутся только их строки.
    """
    n = len(pseudo.columns)
    if witnesses is None:
        rows = set(range(n))
    else:
        rows = {square_of(w.center if isinstance(w, Ball) else w, pseudo.delta)[1] for w in witnesses}
    return tuple((pseudo.columns[row], row) for row in sorted(rows) if (pseudo.columns[row], row) in owned)


def dyadic_class(d: Fraction, delta: Fraction) -> Fraction:
    """Класс d ≤ d_i < 2d; нулевой зазор (соседние квадраты) - отдельный класс δ/2."""
    if d == 0:
        return delta / 2
    return dyadic_floor(d)


def gap_profile(pseudo: PseudoTube, squares: Iterable[Square]) -> GapProfile:
    """d_i = (разность строк − 1)·δ между соседними квадратами Y′ внутри псевдотрубки."""
    own = sorted((s for s in set(squares) if pseudo.contains(s)), key=lambda s: s[1])
    delta = pseudo.delta
    gaps = tuple((b[1] - a[1] - 1) * delta for a, b in zip(own, own[1:], strict=False))
    classes: dict[Fraction, list[int]] = defaultdict(list)
    for i, gap in enumerate(gaps):
        classes[dyadic_class(gap, delta)].append(i)
    return GapProfile(
        pseudo=pseudo,
        squares=tuple(own),
        gaps=gaps,
        classes={d: tuple(ix) for d, ix in sorted(classes.items())},
    )


def is_typical_scale(d: Fraction, delta: Fraction, alpha: Fraction) -> bool:
    """d ≲ δ^α, то есть d ≤ 4·δ^α (точно)."""
    return compare_power(d / TYPICAL_GAP_FACTOR, delta, alpha) <= 0


def select_typical_gap(
    profile: GapProfile, delta: Fraction, alpha: Fraction, constant: Fraction | None = None
) -> GapSelection:
    """Класс d ≲ δ^α с наибольшим d·|I_d|; успех, если d·|I_d|·log δ⁻¹ ≥ c."""
    constant = settings.gap_class_constant if constant is None else constant
    candidates = [(d, len(ix)) for d, ix in profile.classes.items() if is_typical_scale(d, delta, alpha)]
    if not candidates:
        return GapSelection(d=None, size=0, achieved=0.0, threshold=constant, ok=False)
    d, size = max(candidates, key=lambda c: (c[0] * c[1], -c[0]))
    achieved = float(d * size) * log_inverse(delta)
    ok = achieved >= float(constant)
    if not ok:
        logger.debug("Gap class %s below threshold: %.4f < %s", d, achieved, constant)
    return GapSelection(d=d, size=size, achieved=achieved, threshold=constant, ok=ok)


def typical_family(selections: Mapping[Tube, GapSelection]) -> tuple[Fraction | None, list[Tube]]:
    """Раскладывает трубки по выбранному d_T и возвращает самый большой класс."""
    by_d: dict[Fraction, list[Tube]] = defaultdict(list)
    for tube, sel in selections.items():
        if sel.d is not None:
            by_d[sel.d].append(tube)
    if not by_d:
        return None, []
    d = max(by_d, key=lambda k: (len(by_d[k]), -k))
    return d, sorted(by_d[d], key=lambda t: t.sort_key)


# =============================================================================
# Граф пересечений
# =============================================================================


def build_cross_graph(family: Iterable[Tube], witnesses: Mapping[Tube, Sequence[Point]]) -> CrossGraph:
    """Рёбра - соседние точки Y(T) снизу вверх; атрибут "tubes" - трубки, содержащие ребро."""
    graph = nx.Graph()
    for tube in family:
        points = sorted(set(witnesses.get(tube, ())), key=lambda p: (p[1], p[0]))
        graph.add_nodes_from(points)
        for p, q in zip(points, points[1:], strict=False):
            if graph.has_edge(p, q):
                graph.edges[p, q]["tubes"].add(tube)
            else:
                graph.add_edge(p, q, tubes={tube})
    return CrossGraph(graph)


def _integer_segments(segments: Sequence[tuple[Point, Point]]) -> np.ndarray:
    scale = 1
    for seg in segments:
        for x, y in seg:
            scale = math.lcm(scale, x.denominator, y.denominator)
    rows = [[int(c * scale) for p in seg for c in p] for seg in segments]
    peak = max((abs(v) for row in rows for v in row), default=0)
    dtype = np.int64 if peak < 2**20 else object
    return np.array(rows, dtype=dtype).reshape(len(rows), 4)


def _orient(ax, ay, bx, by, cx, cy):
    return np.sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def count_drawing_crossings(segments: Sequence[tuple[Point, Point]]) -> int:
    """Число пар отрезков с собственным пересечением.

    Общая вершина, касание концом и коллинеарное наложение не считаются.
    """
    if len(segments) < 2:
        return 0
    seg = _integer_segments(segments)
    x_lo = np.minimum(seg[:, 0], seg[:, 2])
    x_hi = np.maximum(seg[:, 0], seg[:, 2])
    y_lo = np.minimum(seg[:, 1], seg[:, 3])
    y_hi = np.maximum(seg[:, 1], seg[:, 3])
    total = 0
    for i in range(len(seg) - 1):
        j = slice(i + 1, None)
        near = (x_hi[j] >= x_lo[i]) & (x_lo[j] <= x_hi[i]) & (y_hi[j] >= y_lo[i]) & (y_lo[j] <= y_hi[i])
        if not near.any():
            continue
        other = seg[i + 1 :][near]
        ax, ay, bx, by = seg[i]
        cx, cy, dx, dy = other[:, 0], other[:, 1], other[:, 2], other[:, 3]
        o1 = _orient(ax, ay, bx, by, cx, cy)
        o2 = _orient(ax, ay, bx, by, dx, dy)
        o3 = _orient(cx, cy, dx, dy, ax, ay)
        o4 = _orient(cx, cy, dx, dy, bx, by)
        total += int(np.count_nonzero((o1 * o2 < 0) & (o3 * o4 < 0)))
    return total


def crossing_upper_bound(graph: CrossGraph, family: Sequence[Tube]) -> CrossingBound:
    drawing = count_drawing_crossings(graph.segments())
    bound = CrossingBound(drawing_crossings=drawing, pair_bound=len(family) ** 2)
    logger.debug("Crossings: drawing=%d, pair bound=%d", drawing, bound.pair_bound)
    return bound


def lemma_value(edges: int, cr_ub: int) -> float:
    """min(e, e^{3/2} / max(cr, 1)^{1/2})."""
    return min(float(edges), edges**1.5 / math.sqrt(max(cr_ub, 1)))


def furstenberg_target(delta: Fraction, alpha: Fraction, W: int | Fraction, X: int | Fraction) -> float:
    """min(δ^{−α−1}, δ^{−3α/2}·(XW)^{1/2}, δ^{−α}·XW)."""
    return regime_bounds(delta, alpha, W, X).target


def regime_bounds(delta: Fraction, alpha: Fraction, W: int | Fraction, X: int | Fraction) -> RegimeBounds:
    inv = 1 / delta
    xw = float(X) * float(W)
    first = min(power_float(inv, alpha + 1), power_float(inv, alpha) * xw)
    second = power_float(inv, 3 * alpha / 2) * math.sqrt(xw)
    return RegimeBounds(
        incidence_term=first,
        sqrt_term=second,
        enemy_term=power_float(inv, 2 * alpha) * float(W),
        target=min(first, second),
    )


def lower_bound(
    graph: CrossGraph,
    crossings: CrossingBound,
    *,
    balls: int | None = None,
    delta: Fraction | None = None,
    alpha: Fraction | None = None,
    params: SpacingParams | None = None,
) -> BoundCertificate:
    """Лемма о числе пересечений: |V| ≳ min(|E|, |E|^{3/2}/cr^{1/2}) и сравнение |𝔹| с целью."""
    edges = graph.edge_count
    if edges < 1:
        raise ParameterError("Граф пересечений без рёбер")
    value = lemma_value(edges, crossings.cr_ub)
    if graph.vertex_count < CROSSING_LEMMA_CONSTANT * value:
        raise InvariantViolation(f"|V| = {graph.vertex_count} < min(|E|, |E|^(3/2)/cr^(1/2))/64 = {value / 64:.6g}")
    balls = graph.vertex_count if balls is None else balls
    target = log_factor = target_ratio = None
    notes: list[str] = []
    if delta is not None and alpha is not None and params is not None:
        target = furstenberg_target(delta, alpha, params.W, params.X)
        log_factor = log_inverse(delta) ** float(FURSTENBERG_LOG_EXPONENT)
        target_ratio = balls / target
        # формулировка теоремы даёт показатель логарифма +3.5, доказательство −3.5
        notes.append("log exponent -7/2 (statement reads +7/2)")
    return BoundCertificate(
        balls=balls,
        vertices=graph.vertex_count,
        edges=edges,
        drawing_crossings=crossings.drawing_crossings,
        pair_bound=crossings.pair_bound,
        cr_ub=crossings.cr_ub,
        lemma_value=value,
        vertex_ratio=graph.vertex_count / value,
        target=target,
        log_factor=log_factor,
        target_ratio=target_ratio,
        notes=tuple(notes),
    )


# =============================================================================
# Подсчёт рёбер в двух режимах
# =============================================================================


def edge_identity(graph: CrossGraph, centers: Mapping[Tube, Sequence[Point]]) -> Fraction:
    """Σ_T Σ_{e ⊂ T} 1/n_e по соседним парам Y(T) каждой трубки; должно совпасть с |E|.

    Ребро e встречается у n_e трубок; при согласованных с Y(T) кратностях
    каждое даёт ровно 1.
    """
    total = Fraction(0)
    for tube, points in centers.items():
        ordered = sorted(set(points), key=lambda p: (p[1], p[0]))
        for p, q in zip(ordered, ordered[1:], strict=False):
            if not graph.graph.has_edge(p, q):
                raise InvariantViolation(f"Ребра {p}–{q} трубки {tube} нет в графе")
            total += Fraction(1, graph.multiplicity(p, q))
    return total


def shared_edges(graph: CrossGraph) -> Counter[tuple[Tube, Tube]]:
    """Число общих рёбер для каждой упорядоченной пары трубок."""
    shared: Counter[tuple[Tube, Tube]] = Counter()
    for _, _, tubes in graph.graph.edges(data="tubes"):
        for a in tubes:
            for b in tubes:
                if a != b:
                    shared[(a, b)] += 1
    return shared


def shared_edge_bound(mu: Fraction, delta: Fraction, alpha: Fraction) -> float:
    """μ⁻¹·δ^{1−α} + 1: сколько рёбер длины ∼ δ^α могут делить две трубки под углом μ."""
    return power_float(delta, 1 - alpha) / float(mu) + 1


def _edge_is_short(p: Point, q: Point, delta: Fraction, alpha: Fraction) -> bool:
    dx, dy = q[0] - p[0], q[1] - p[1]
    return compare_power((dx * dx + dy * dy) / TYPICAL_GAP_FACTOR**2, delta, 2 * alpha) <= 0


def fits_case1(delta: Fraction, alpha: Fraction, X: int | Fraction, W: int | Fraction) -> bool:
    """XW ≲ δ^{−2+α}, точно: XW ≤ 2·δ^{α−2}."""
    return compare_power(Fraction(X) * Fraction(W) / 2, delta, alpha - 2) <= 0


def edge_count_case1(
    family: Sequence[Tube],
    graph: CrossGraph,
    delta: Fraction,
    alpha: Fraction,
    X: int | Fraction,
    W: int | Fraction,
    centers: Mapping[Tube, Sequence[Point]],
) -> EdgeCountCertificate:
    """|E| через кратности и угловые корзины; при XW ≳ δ^{−2+α} уходит в edge_count_case2."""
    if not fits_case1(delta, alpha, X, W):
        logger.info("XW=%s above delta^(alpha-2), switching to reduced parameters", Fraction(X) * Fraction(W))
        return EdgeCountCertificate(case=2, reduced=edge_count_case2(SpacingParams(delta, Fraction(W), Fraction(X)), alpha))

    edges = edge_identity(graph, centers)
    if edges != graph.edge_count:
        raise InvariantViolation(f"Σ 1/n_e = {edges} ≠ |E| = {graph.edge_count}")

    key: Counter[Tube] = Counter()
    for p, q, tubes in graph.graph.edges(data="tubes"):
        if _edge_is_short(p, q, delta, alpha):
            for t in tubes:
                key[t] += len(tubes)
    key_constant = max(key.values(), default=0) * power_float(delta, alpha)

    floor_mu = delta
    per_tube: dict[Tube, Counter[Fraction]] = defaultdict(Counter)
    angular_constant = 0.0
    for (a, b), count in shared_edges(graph).items():
        mu = max(abs(a.v - b.v), floor_mu)
        angular_constant = max(angular_constant, count / shared_edge_bound(mu, delta, alpha))
        if compare_power(mu, delta, 1 - alpha) <= 0:
            per_tube[a][dyadic_floor(mu)] += count
    angular: dict[Fraction, int] = {}
    for buckets in per_tube.values():
        for mu, count in buckets.items():
            angular[mu] = max(angular.get(mu, 0), count)

    size = max(len(family), 1)
    edge_ratio = float(edges) * log_inverse(delta) ** 2 / (power_float(1 / delta, alpha) * size)
    return EdgeCountCertificate(
        case=1,
        edges=edges,
        edge_ratio=edge_ratio,
        key_constant=key_constant,
        angular=dict(sorted(angular.items())),
        angular_constant=angular_constant,
    )


def edge_count_case2(params: SpacingParams, alpha: Fraction) -> ReducedParams:
    """(X′, W′) с X′ ≤ X, W′ ≤ W, 1 ≤ W′ ≤ X′ и X′W′ в пределах множителя 2 от δ^{−2+α}."""
    delta = params.delta
    W, X = params.integers()
    target = power_float(delta, alpha - 2)

    def feasible(x: int, w: int) -> bool:
        product = Fraction(x * w)
        return compare_power(product * 2, delta, alpha - 2) >= 0 and compare_power(product / 2, delta, alpha - 2) <= 0

    if feasible(X, W):
        return ReducedParams(X=X, W=W, target=target)
    for x in range(X, 0, -1):
        options = [w for w in range(1, min(W, x) + 1) if feasible(x, w)]
        if options:
            w = min(options, key=lambda w: abs(math.log(x * w / target)))
            logger.info("Reduced parameters: X'=%d, W'=%d (target %.1f)", x, w, target)
            return ReducedParams(X=x, W=w, target=target)
    raise InfeasibleParameters(f"Нет пары (X′, W′) для δ={delta}, α={alpha}, W={W}, X={X}")


def thin_to_spacing(tubes: Iterable[Tube], reduced: ReducedParams) -> list[Tube]:
    """Жадно оставляет трубки, чьи направления разнесены на ≥ 1/X′ среди соседей.

    Соседи - трубки, которые могут оказаться в одной пробной W′⁻¹-трубке:
    |Δu| < 1/W′ и |Δ(u + v)| < 1/W′.
    """
    width = Fraction(1, reduced.W)
    gap = Fraction(1, reduced.X)
    buckets: dict[tuple[int, int], list[Tube]] = defaultdict(list)
    kept: list[Tube] = []
    for tube in sorted(tubes, key=lambda t: t.sort_key):
        a, b = math.floor(tube.u / width), math.floor((tube.u + tube.v) / width)
        clash = False
        for da in (-1, 0, 1):
            for db in (-1, 0, 1):
                for other in buckets.get((a + da, b + db), ()):
                    if (
                        abs(other.u - tube.u) < width
                        and abs(other.u + other.v - tube.u - tube.v) < width
                        and abs(other.v - tube.v) < gap
                    ):
                        clash = True
                        break
        if not clash:
            kept.append(tube)
            buckets[(a, b)].append(tube)
    logger.debug("Thinned %d tubes to X'=%d W'=%d spacing", len(kept), reduced.X, reduced.W)
    return kept


# =============================================================================
# Конвейер
# =============================================================================


def run_pipeline(
    example: FurstenbergExample,
    alpha: Fraction | None = None,
    params: SpacingParams | None = None,
    *,
    jobs: int = 1,
) -> PipelineResult:
    """Растеризация → зазоры → выбор d → 𝕋′ → граф → пересечения → оценки."""
    delta = example.delta
    alpha = example.alpha if alpha is None else alpha
    params = example.params if params is None else params
    notes = list(example.notes)

    family = near_vertical(example.tubes)
    pseudos = dict(zip(family, _rasterize_many(family, delta, jobs), strict=True))
    owned = ball_squares(example.balls, delta)
    squares = {t: squares_from_balls(pseudos[t], owned, example.witnesses.get(t)) for t in family}
    selections = {
        t: select_typical_gap(gap_profile(pseudos[t], squares[t]), delta, alpha) for t in family
    }
    d, typical = typical_family(selections)
    centers = {t: [square_center(s, delta) for s in squares[t]] for t in typical}

    graph = build_cross_graph(typical, centers)
    if graph.vertex_count > len(owned):
        raise InvariantViolation(f"|V| = {graph.vertex_count} больше числа квадратов 𝔹 {len(owned)}")
    expected = sum(len(centers[t]) - 1 for t in typical)
    if graph.multiplicity_sum != expected:
        raise InvariantViolation(f"Σ n_e = {graph.multiplicity_sum} ≠ Σ(|Y(T)| − 1) = {expected}")
    crossings = crossing_upper_bound(graph, typical)
    if crossings.drawing_crossings > crossings.pair_bound:
        raise InvariantViolation(
            f"Пересечений в рисунке {crossings.drawing_crossings} больше |𝕋′|² = {crossings.pair_bound}"
        )

    certificate = None
    edge_count = None
    if graph.edge_count:
        certificate = lower_bound(graph, crossings, balls=len(example.balls), delta=delta, alpha=alpha, params=params)
        if params is not None:
            edge_count = edge_count_case1(typical, graph, delta, alpha, params.X, params.W, centers)
    else:
        notes.append("crossing graph has no edges")
    regimes = regime_bounds(delta, alpha, params.W, params.X) if params is not None else None

    logger.info(
        "Pipeline %s: %d near-vertical tubes, |T'|=%d at d=%s, |V|=%d |E|=%d cr<=%d",
        example.case, len(family), len(typical), d, graph.vertex_count, graph.edge_count, crossings.cr_ub,
    )
    return PipelineResult(
        family_size=len(family),
        typical_size=len(typical),
        d=d,
        graph=graph,
        crossings=crossings,
        certificate=certificate,
        edge_count=edge_count,
        regimes=regimes,
        notes=tuple(notes),
    )
