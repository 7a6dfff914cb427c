"""Генераторы точных примеров: рациональная решётка прямых с богатыми точками,
кусты, полосы Фурстенберга и семейство с иррациональным сдвигом.
"""

import logging
import math
from bisect import bisect_left
from collections import defaultdict
from collections.abc import Iterator
from itertools import pairwise
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from tubelab.config import settings
from tubelab.constants import (
    BUSH_CLUSTER_OFFSET,
    BUSH_CLUSTER_SLOPE,
    BUSH_RICH_AREA_FACTOR,
    SQRT2_DENOMINATOR_FACTOR,
    SQRT2_SPACING_SLACK,
)
from tubelab.exceptions import ParameterError
from tubelab.services.geometry import (
    Ball,
    Point,
    SpacingParams,
    Tube,
    Window,
    incident,
    require_inverse_integer,
)
from tubelab.services.incidence import TubeSpacingReport, verify_tube_spacing
from tubelab.utils import ceil_power, compare_power, floor_power

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RichPoint:
    point: Point
    p: int
    q: int
    c: int
    solutions: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class SWindow:
    """Окно для множества дробей S: lower ≤ p/q ≤ upper, X/(spread·r) ≤ p, q ≤ cap·X/r."""

    lower: Fraction = Fraction(1, 4)
    upper: Fraction = Fraction(3, 4)
    spread: Fraction = Fraction(100)
    cap: Fraction = Fraction(100)

    @classmethod
    def from_settings(cls) -> "SWindow":
        return cls(settings.s_lower, settings.s_upper, settings.s_spread, settings.s_spread)


@dataclass(frozen=True)
class RationalExample:
    params: SpacingParams
    r: int
    tubes: tuple[Tube, ...]
    fractions: tuple[Fraction, ...]
    points: tuple[RichPoint, ...]
    window: SWindow
    min_solutions: int
    dropped_points: int

    @property
    def balls(self) -> tuple[Ball, ...]:
        return tuple(Ball(pt.point, self.params.delta) for pt in self.points)

    @property
    def cardinality_ratio(self) -> float:
        W, X = self.params.integers()
        return len(self.points) * self.r**3 / (W * W * X * X)

    @property
    def separation_bound(self) -> Fraction:
        """Нижняя граница попарного разнесения точек: r/(cap·XW)·min(1, r/cap).

        В строке y = p/q шаг 1/(qW), q ≤ cap·X/r; между строками |p/q − p'/q'| ≥ (X/W)/(qq').
        При cap = 1 это r/(XW).
        """
        W, X = self.params.integers()
        cap = Fraction(self.window.cap)
        return Fraction(self.r, X * W) / cap * min(Fraction(1), self.r / cap)


@dataclass(frozen=True)
class BushExample:
    params: SpacingParams
    r: int
    apexes: tuple[Point, ...]
    bushes: tuple[tuple[Tube, ...], ...]

    @property
    def tubes(self) -> tuple[Tube, ...]:
        return tuple(t for bush in self.bushes for t in bush)

    @property
    def cluster_radius(self) -> Fraction:
        """Радиус вокруг вершины, вне которого шар не встречает r трубок своего куста."""
        return (BUSH_CLUSTER_SLOPE * self.params.X / (self.r - 1) + BUSH_CLUSTER_OFFSET) * self.params.delta

    @property
    def expected_rich(self) -> Fraction:
        """Оценка |B_r| на решётке шага δ: ≈ 8(X/r)² на вершину."""
        return BUSH_RICH_AREA_FACTOR * len(self.apexes) * (self.params.X / self.r) ** 2


@dataclass(frozen=True)
class FurstenbergExample:
    case: str  # "strips" | "strips_tubes" | "sqrt2"
    delta: Fraction
    alpha: Fraction
    intervals: tuple[Fraction, ...]
    tubes: tuple[Tube, ...]
    balls: tuple[Ball, ...]
    witnesses: dict[Tube, tuple[Ball, ...]]
    params: SpacingParams | None = None
    rho: Fraction | None = None
    spacing_tubes: tuple[Tube, ...] = ()
    spacing_report: TubeSpacingReport | None = None
    r: int | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def witness_gap(self) -> Fraction:
        """Наименьшее расстояние по вертикали между соседними свидетелями одной трубки."""
        gaps = [
            b2.center[1] - b1.center[1]
            for ys in self.witnesses.values()
            for b1, b2 in zip(ys, ys[1:], strict=False)
        ]
        return min(gaps) if gaps else Fraction(0)


# =============================================================================
# Целочисленные помощники
# =============================================================================


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) с a·x + b·y = g = gcd(a, b)."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def linear_solutions(A: int, B: int, c: int, a_max: int, b_max: int) -> list[tuple[int, int]]:
    """Все (a, b) с A·b + B·a = c, 0 ≤ a ≤ a_max, 0 ≤ b ≤ b_max.

    Параметризация (a₀ − (A/g)·t, b₀ + (B/g)·t) от частного решения расширенного Евклида;
    A, B > 0.
    """
    if A <= 0 or B <= 0:
        raise ParameterError(f"Коэффициенты должны быть положительными: A={A}, B={B}")
    g, x, y = extended_gcd(A, B)
    if c % g:
        return []
    b0, a0 = x * (c // g), y * (c // g)
    sa, sb = A // g, B // g
    # 0 ≤ a0 − sa·t ≤ a_max и 0 ≤ b0 + sb·t ≤ b_max
    t_lo = max(-((a_max - a0) // sa), -(b0 // sb))
    t_hi = min(a0 // sa, (b_max - b0) // sb)
    return sorted((a0 - sa * t, b0 + sb * t) for t in range(t_lo, t_hi + 1))


def sqrt_convergents(n: int) -> Iterator[Fraction]:
    """Подходящие дроби цепной дроби √n (n - не квадрат)."""
    a0 = math.isqrt(n)
    if a0 * a0 == n:
        raise ParameterError(f"{n} - точный квадрат")
    m, d, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    yield Fraction(h, k)
    while True:
        m = d * a - m
        d = (n - m * m) // d
        a = (a0 + m) // d
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        yield Fraction(h, k)


def sqrt2_convergent(m: int) -> Fraction:
    """Первая подходящая дробь ρ к √2 со знаменателем ≥ 10·m и |ρ − √2| < 1/(40·m²)."""
    for rho in sqrt_convergents(2):
        # |ρ − √2| = |ρ² − 2| / (ρ + √2) < |ρ² − 2| / (ρ + 1)
        if rho.denominator >= SQRT2_DENOMINATOR_FACTOR * m and abs(rho * rho - 2) < (rho + 1) / (40 * m * m):
            return rho
    raise AssertionError("unreachable")


def sqrt2_separation_holds(rho: Fraction, m: int) -> bool:
    """|a − ρ·b| ≥ 1/(5·max(a, b)) для всех 0 ≤ a, b ≤ m, кроме a = b = 0."""
    for a in range(m + 1):
        for b in range(m + 1):
            if a == b == 0:
                continue
            gap = abs(a - rho * b)
            if gap * 5 * max(a, b) < 1:
                return False
    return True


def min_separation_sq(points: list[Point]) -> Fraction | None:
    """Точный квадрат наименьшего попарного расстояния.

    Точки группируются по строкам y. Внутри строки хватает соседей по x, между строками
    берутся ближайшие по x соседи, пока dy² меньше найденного минимума.
    """
    rows: dict[Fraction, list[Fraction]] = defaultdict(list)
    for x, y in points:
        rows[y].append(x)
    ys = sorted(rows)
    xs = [sorted(rows[y]) for y in ys]
    best: Fraction | None = None
    for row in xs:
        for a, b in pairwise(row):
            d = (b - a) ** 2
            if best is None or d < best:
                best = d
    for i, y1 in enumerate(ys):
        for j in range(i + 1, len(ys)):
            dy2 = (ys[j] - y1) ** 2
            if best is not None and dy2 >= best:
                break
            other = xs[j]
            for x in xs[i]:
                k = bisect_left(other, x)
                for x2 in other[max(k - 1, 0) : k + 1]:
                    d = (x2 - x) ** 2 + dy2
                    if best is None or d < best:
                        best = d
    return best


def _require_int(name: str, value: Fraction | int) -> int:
    value = Fraction(value)
    if value.denominator != 1 or value < 1:
        raise ParameterError(f"{name} должно быть целым положительным, получено {value}")
    return int(value)


# =============================================================================
# Рациональный пример и кусты
# =============================================================================


def grid_tubes(delta: Fraction, W: int, X: int) -> tuple[Tube, ...]:
    """Прямые от (a/W, 0) к (b/X, 1), 0 ≤ a ≤ W, 0 ≤ b ≤ X."""
    return tuple(
        Tube(Fraction(a, W), Fraction(b, X) - Fraction(a, W), delta) for a in range(W + 1) for b in range(X + 1)
    )


def enumerate_s(X: int, W: int, r: int, window: SWindow) -> tuple[Fraction, ...]:
    step = X // W
    p_lo = max(1, math.ceil(X / (window.spread * r)))
    hi = math.floor(window.cap * X / r)
    found = set()
    for p in range(step * math.ceil(p_lo / step), hi + 1, step):
        q_lo = max(math.ceil(p / window.upper), math.ceil(X / (window.spread * r)), p + 1)
        q_hi = min(math.floor(p / window.lower), hi)
        for q in range(q_lo, q_hi + 1):
            if math.gcd(p, q) == 1:
                found.add(Fraction(p, q))
    return tuple(sorted(found))


def _rich_points(
    fractions: tuple[Fraction, ...], W: int, X: int, min_solutions: int
) -> tuple[list[RichPoint], int]:
    points: list[RichPoint] = []
    dropped = 0
    for frac in fractions:
        p, q = frac.numerator, frac.denominator
        A, B = p * W // X, q - p
        for c in range(q * W + 1):
            solutions = linear_solutions(A, B, c, W, X)
            if len(solutions) < min_solutions:
                dropped += 1
                continue
            points.append(RichPoint((Fraction(c, q * W), frac), p, q, c, tuple(solutions)))
    return points, dropped


def build_case1(
    delta: Fraction,
    W: int,
    X: int,
    r: int,
    *,
    window: SWindow | None = None,
    min_solutions: int | None = None,
) -> RationalExample:
    """Решётка прямых (a/W, 0) → (b/X, 1) и её богатые точки (c/(qW), p/q), p/q ∈ S.

    Точный режим - r < W. При r ≥ W пример всё равно строится (развёртка по
    W ∈ {2, 4}, r ∈ {2, 4} содержит такие клетки) и в лог уходит предупреждение;
    разнесение ≥ r/(XW) тогда не гарантируется.
    """
    n = require_inverse_integer(delta)
    W, X, r = _require_int("W", W), _require_int("X", X), _require_int("r", r)
    params = SpacingParams(delta, Fraction(W), Fraction(X))
    if X % W:
        raise ParameterError(f"W должно делить X: W={W}, X={X}")
    if r < 2:
        raise ParameterError(f"Нужно r ≥ 2, получено {r}")
    if r * n <= W * X:
        raise ParameterError(f"Нужно r > δ·W·X: r={r}, δWX={Fraction(W * X, n)}")
    if r >= W:
        logger.warning("Case-1 example outside the sharp regime r < W: r=%d, W=%d", r, W)
    window = window or SWindow.from_settings()
    min_solutions = min_solutions if min_solutions is not None else r // 100 + 1

    fractions = enumerate_s(X, W, r, window)
    points, dropped = _rich_points(fractions, W, X, min_solutions)
    logger.info(
        "Case-1 example W=%d X=%d r=%d: |S|=%d, %d points, %d dropped", W, X, r, len(fractions), len(points), dropped
    )
    return RationalExample(
        params=params,
        r=r,
        tubes=grid_tubes(delta, W, X),
        fractions=fractions,
        points=tuple(points),
        window=window,
        min_solutions=min_solutions,
        dropped_points=dropped,
    )


def build_case2(delta: Fraction, W: int, X: int, r: int) -> BushExample:
    """W + 1 вершин (a/W, 0), в каждой X-куст с направлениями j/X − 1/2."""
    require_inverse_integer(delta)
    W, X, r = _require_int("W", W), _require_int("X", X), _require_int("r", r)
    params = SpacingParams(delta, Fraction(W), Fraction(X))
    if not W < r <= X:
        raise ParameterError(f"Нужно W < r ≤ X: W={W}, r={r}, X={X}")
    if Fraction(X, r) * delta > Fraction(1, W):
        raise ParameterError(f"Нужно (X/r)·δ ≤ 1/W: X={X}, r={r}, δ={delta}, W={W}")
    apexes = tuple((Fraction(a, W), Fraction(0)) for a in range(W + 1))
    bushes = tuple(
        tuple(Tube(apex[0], Fraction(j, X) - Fraction(1, 2), delta) for j in range(X)) for apex in apexes
    )
    logger.info("Bush example W=%d X=%d r=%d: %d apexes", W, X, r, len(apexes))
    return BushExample(params=params, r=r, apexes=apexes, bushes=bushes)


def build_position_family(delta: Fraction, W: int, X: int) -> tuple[Tube, ...]:
    """Семейство с разнесёнными положениями: u = a/X, v = b/W (|v| ≤ 1)."""
    require_inverse_integer(delta)
    W, X = _require_int("W", W), _require_int("X", X)
    SpacingParams(delta, Fraction(W), Fraction(X))
    return tuple(Tube(Fraction(a, X), Fraction(b, W), delta) for a in range(X + 1) for b in range(-W, W + 1))


# =============================================================================
# Примеры Фурстенберга
# =============================================================================


def strip_positions(delta: Fraction, alpha: Fraction) -> tuple[Fraction, ...]:
    """Начала отрезков I_i длины δ с шагом (⌈δ^{α−1}⌉ + 1)·δ, целиком внутри [0, 1]."""
    n = require_inverse_integer(delta)
    if not 0 < alpha < 1:
        raise ParameterError(f"Нужно 0 < α < 1, получено {alpha}")
    g = ceil_power(Fraction(n), 1 - alpha)
    spacing = (g + 1) * delta
    count = min(floor_power(Fraction(n), alpha), math.floor((1 - delta) / spacing) + 1)
    return tuple(i * spacing for i in range(count))


def _strip_rows(start: Fraction, delta: Fraction) -> list[Fraction]:
    """Строки решётки δ/2, шары которых задевают полосу [0,1] × [start, start + δ]."""
    half = delta / 2
    lo = max(Fraction(0), start - delta)
    hi = min(Fraction(1), start + 2 * delta)
    return [j * half for j in range(math.ceil(lo / half), math.floor(hi / half) + 1)]


def _nearest_lattice(x: Fraction, delta: Fraction) -> Fraction:
    half = delta / 2
    return min(max(round(x / half) * half, Fraction(0)), Fraction(1))


def build_furst_strips(delta: Fraction, alpha: Fraction) -> FurstenbergExample:
    """Полосы [0,1] × I_i; 𝕋 - вертикальные трубки по столбцам δ·ℤ, свидетели - по шару на полосу."""
    n = require_inverse_integer(delta)
    starts = strip_positions(delta, alpha)
    half = delta / 2
    columns = [i * half for i in range(2 * n + 1)]
    balls = tuple(Ball((x, y), delta) for start in starts for y in _strip_rows(start, delta) for x in columns)
    tubes = tuple(Tube(i * delta, Fraction(0), delta) for i in range(n + 1))
    witnesses = {t: tuple(Ball((t.u, s + half), delta) for s in starts) for t in tubes}
    logger.info("Strip example delta=%s alpha=%s: %d strips, %d balls", delta, alpha, len(starts), len(balls))
    return FurstenbergExample(
        case="strips",
        delta=delta,
        alpha=alpha,
        intervals=starts,
        tubes=tubes,
        balls=tuple(sorted(set(balls), key=lambda b: b.sort_key)),
        witnesses=witnesses,
    )


def build_furst_intersected(delta: Fraction, alpha: Fraction, W: int, X: int) -> FurstenbergExample:
    """Шары, задевающие полосы ∩ трубки решётки (a/W, 0) → (b/X, 1)."""
    require_inverse_integer(delta)
    W, X = _require_int("W", W), _require_int("X", X)
    params = SpacingParams(delta, Fraction(W), Fraction(X))
    starts = strip_positions(delta, alpha)
    tubes = grid_tubes(delta, W, X)
    balls, witnesses = _balls_on_strips(tubes, starts, delta)
    logger.info(
        "Strips-tubes example W=%d X=%d alpha=%s: %d tubes, %d balls", W, X, alpha, len(tubes), len(balls)
    )
    return FurstenbergExample(
        case="strips_tubes",
        delta=delta,
        alpha=alpha,
        intervals=starts,
        tubes=tubes,
        balls=balls,
        witnesses=witnesses,
        params=params,
    )


def _balls_on_strips(
    tubes: tuple[Tube, ...], starts: tuple[Fraction, ...], delta: Fraction
) -> tuple[tuple[Ball, ...], dict[Tube, tuple[Ball, ...]]]:
    half = delta / 2
    reach = 3 * delta
    found: set[Ball] = set()
    witnesses: dict[Tube, tuple[Ball, ...]] = {}
    for tube in tubes:
        own = []
        for start in starts:
            for y in _strip_rows(start, delta):
                x = tube.x_at(y)
                for i in range(max(0, math.ceil((x - reach) / half)), min(2 * int(1 / delta), math.floor((x + reach) / half)) + 1):
                    ball = Ball((i * half, y), delta)
                    if incident(ball, tube):
                        found.add(ball)
            mid = start + half
            witness = Ball((_nearest_lattice(tube.x_at(mid), delta), mid), delta)
            if incident(witness, tube):
                found.add(witness)
                own.append(witness)
        witnesses[tube] = tuple(own)
    return tuple(sorted(found, key=lambda b: b.sort_key)), witnesses


def sqrt2_richness(delta: Fraction, alpha: Fraction, X: int, W: int) -> int:
    """r = ⌊(δ^α·X·W)^{1/2}⌋, вычисленное точно."""
    n = require_inverse_integer(delta)
    r = 0
    while compare_power(Fraction((r + 1) ** 2, X * W), Fraction(n), -alpha) <= 0:
        r += 1
    return r


def build_furst_sqrt2(
    delta: Fraction, alpha: Fraction, X: int, W: int, *, window: SWindow | None = None
) -> FurstenbergExample:
    """Семейство с иррациональным сдвигом при (X′, W′) = ((XW)^{1/2}, (XW)^{1/2}).

    Трубки (a/m, 0) → (ρ·b/m, 1) с подходящей дробью ρ ≈ √2 свидетельствуют условие
    разреженности для исходных (W, X). Шары и свидетели Y(T) строятся на рациональной
    решётке (a/m, 0) → (b/m, 1), с которой сдвиг отождествляет картину пересечений:
    богатые точки (c/(qm), p/q) при q ≤ m/r, так что соседние строки отстоят на ≥ r²/(XW).
    """
    n = require_inverse_integer(delta)
    X, W = _require_int("X", X), _require_int("W", W)
    params = SpacingParams(delta, Fraction(W), Fraction(X))
    if math.isqrt(X) ** 2 != X or math.isqrt(W) ** 2 != W:
        raise ParameterError(f"X и W должны быть квадратами: X={X}, W={W}")
    if not 0 < alpha < 1:
        raise ParameterError(f"Нужно 0 < α < 1, получено {alpha}")
    r = sqrt2_richness(delta, alpha, X, W)
    if r < 2:
        logger.warning("sqrt2 example degenerate ((delta^alpha XW)^1/2 < 2), falling back to strips-tubes")
        fallback = build_furst_intersected(delta, alpha, W, X)
        return replace(fallback, notes=("fallback: (δ^α·XW)^{1/2} < 2",))

    m = math.isqrt(X * W)
    rho = sqrt2_convergent(m)
    window = window or SWindow.from_settings()

    spacing_tubes = []
    dropped = 0
    for a in range(m + 1):
        for b in range(m + 1):
            v = rho * b / m - Fraction(a, m)
            if abs(v) > 1:
                dropped += 1
                continue
            spacing_tubes.append(Tube(Fraction(a, m), v, delta))
    spacing_report = verify_tube_spacing(spacing_tubes, params, slack=SQRT2_SPACING_SLACK)

    fractions = set()
    q_cap = m // r
    q_floor = max(2, math.ceil(m / (window.spread * r)))
    for q in range(q_floor, q_cap + 1):
        for p in range(1, q):
            if math.gcd(p, q) == 1 and window.lower <= Fraction(p, q) <= window.upper:
                fractions.add(Fraction(p, q))
    points, _ = _rich_points(tuple(sorted(fractions)), m, m, max(1, r // 2))

    on_pair: dict[tuple[int, int], list[Ball]] = {}
    for pt in points:
        ball = Ball(pt.point, delta)
        for pair in pt.solutions:
            on_pair.setdefault(pair, []).append(ball)
    on_tube = {Tube(Fraction(a, m), Fraction(b - a, m), delta): bs for (a, b), bs in sorted(on_pair.items())}
    witnesses = {t: tuple(sorted(bs, key=lambda b: b.center[1])) for t, bs in on_tube.items() if bs}
    balls = tuple(sorted({Ball(pt.point, delta) for pt in points}, key=lambda b: b.sort_key))

    notes = [f"rho={rho}", f"dropped_spacing_tubes={dropped}"]
    if not sqrt2_separation_holds(rho, m):
        notes.append("separation certificate failed")
    logger.info(
        "sqrt2 example X=%d W=%d alpha=%s: m=%d r=%d rho=%s, %d balls, %d witness tubes",
        X, W, alpha, m, r, rho, len(balls), len(witnesses),
    )
    return FurstenbergExample(
        case="sqrt2",
        delta=delta,
        alpha=alpha,
        intervals=tuple(sorted(fractions)),
        tubes=tuple(witnesses),
        balls=balls,
        witnesses=witnesses,
        params=params,
        rho=rho,
        spacing_tubes=tuple(spacing_tubes),
        spacing_report=spacing_report,
        r=r,
        notes=tuple(notes),
    )


# =============================================================================
# Случайные экземпляры
# =============================================================================


def random_grid_balls(params: SpacingParams, rng: np.random.Generator, fill: float = 0.5) -> tuple[Ball, ...]:
    """Не больше одного шара решётки δ/2 в каждой клетке W⁻¹ × X⁻¹ (длинная сторона по x)."""
    W, X = params.integers()
    step = params.delta / 2
    m = require_inverse_integer(step)
    balls = []
    for col in range(W):
        for row in range(X):
            if rng.random() >= fill:
                continue
            i_lo, i_hi = math.ceil(Fraction(col, W) / step), min(m, math.ceil(Fraction(col + 1, W) / step) - 1)
            j_lo, j_hi = math.ceil(Fraction(row, X) / step), min(m, math.ceil(Fraction(row + 1, X) / step) - 1)
            i = int(rng.integers(i_lo, i_hi + 1))
            j = int(rng.integers(j_lo, j_hi + 1))
            balls.append(Ball((i * step, j * step), params.delta))
    return tuple(balls)


def random_tubes(
    delta: Fraction, count: int, rng: np.random.Generator, *, K: int | None = None, resolution: int = 4096
) -> tuple[Tube, ...]:
    """Случайные рациональные трубки: u ∈ [0, 1], v ∈ [−1, 1], поворот - если задан K."""
    tubes = set()
    while len(tubes) < count:
        u = Fraction(int(rng.integers(0, resolution + 1)), resolution)
        v = Fraction(int(rng.integers(-resolution, resolution + 1)), resolution)
        k = int(rng.integers(0, K)) if K else 0
        tubes.add(Tube(u, v, delta, k))
    return tuple(sorted(tubes, key=lambda t: t.sort_key))


def random_balls(delta: Fraction, count: int, rng: np.random.Generator) -> tuple[Ball, ...]:
    """Случайные шары решётки δ/2."""
    m = require_inverse_integer(delta / 2)
    balls = set()
    while len(balls) < min(count, (m + 1) ** 2):
        i, j = (int(x) for x in rng.integers(0, m + 1, size=2))
        balls.add(Ball((i * delta / 2, j * delta / 2), delta))
    return tuple(sorted(balls, key=lambda b: b.sort_key))


def dual_pairs(delta: Fraction, count: int, rng: np.random.Generator) -> list[tuple[Ball, Ball]]:
    """Пары (шар Π₁, шар Π₂), где центр второго лежит в пределах 3δ по u от l₂(центра первого).

    Такие пары попадают по обе стороны порога инцидентности.
    """
    m = require_inverse_integer(delta / 2)
    pairs = []
    for _ in range(count):
        i, j = (int(x) for x in rng.integers(0, m + 1, size=2))
        x, y = i * delta / 2, j * delta / 2
        v = int(rng.integers(-m, m + 1)) * delta / 2
        u = min(max(x - v * y + int(rng.integers(-24, 25)) * delta / 8, Fraction(-2)), Fraction(2))
        pairs.append((Ball((x, y), delta), Ball((u, v), delta, Window.dual)))
    return pairs
