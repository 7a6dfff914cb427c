"""Точное рациональное ядро: δ-шары, δ-трубки, прямоугольники и предикат инцидентности.

Все вычисления ведутся во `fractions.Fraction`; расстояния сравниваются в квадрате,
корни не извлекаются.
"""

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from tubelab.config import settings
from tubelab.constants import DUAL_WINDOW_HALF_SIZE, ROTATION_ANGLE_PRECISION
from tubelab.exceptions import ParameterError

logger = logging.getLogger(__name__)

Scalar = Fraction
Point = tuple[Fraction, Fraction]
Segment = tuple[Point, Point]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def _half_lens_threshold() -> Fraction:
    """Порог t: две δ-окружности на расстоянии t·δ пересекаются ровно по половине площади.

    Площадь линзы 2r²(θ − sinθ·cosθ), где cosθ = d/(2r); решаем θ − sinθ·cosθ = π/4
    бисекцией и округляем t = 2cosθ до рационального со знаменателем 2⁶⁰.
    """
    lo, hi = 0.0, math.pi / 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid - math.sin(mid) * math.cos(mid) < math.pi / 4:
            lo = mid
        else:
            hi = mid
    t = 2 * math.cos((lo + hi) / 2)
    return Fraction(round(t * 2**60), 2**60)


ESSENTIAL_DISTINCTNESS_T = _half_lens_threshold()


class Window(str, Enum):
    unit = "unit"
    dual = "dual"

    @property
    def bounds(self) -> tuple[Fraction, Fraction]:
        if self is Window.unit:
            return ZERO, ONE
        return Fraction(-DUAL_WINDOW_HALF_SIZE), Fraction(DUAL_WINDOW_HALF_SIZE)

    def contains(self, p: Point) -> bool:
        lo, hi = self.bounds
        return lo <= p[0] <= hi and lo <= p[1] <= hi


class Orientation(str, Enum):
    """Какая ось несёт длинную сторону клетки W⁻¹ × X⁻¹."""

    u_long = "u_long"
    v_long = "v_long"


@dataclass(frozen=True)
class Rotation:
    """Поворот вокруг (1/2, 1/2) с точной рациональной парой (cos, sin), cos² + sin² = 1."""

    cos: Fraction
    sin: Fraction

    def apply(self, p: Point) -> Point:
        x, y = p[0] - HALF, p[1] - HALF
        return HALF + self.cos * x - self.sin * y, HALF + self.sin * x + self.cos * y

    def inverse(self, p: Point) -> Point:
        x, y = p[0] - HALF, p[1] - HALF
        return HALF + self.cos * x + self.sin * y, HALF - self.sin * x + self.cos * y

    def apply_vector(self, d: Point) -> Point:
        return self.cos * d[0] - self.sin * d[1], self.sin * d[0] + self.cos * d[1]

    def inverse_vector(self, d: Point) -> Point:
        return self.cos * d[0] + self.sin * d[1], -self.sin * d[0] + self.cos * d[1]

    @property
    def angle(self) -> float:
        return math.atan2(self.sin, self.cos)


IDENTITY = Rotation(ONE, ZERO)


def _angle_error(a: float, b: float) -> float:
    diff = (a - b) % (2 * math.pi)
    return min(diff, 2 * math.pi - diff)


@lru_cache(maxsize=4096)
def snap_rotation(k: int, K: int) -> Rotation:
    """Рациональный поворот на угол ≈ 2πk/K через пифагоровы тройки.

    cos = (1 − t²)/(1 + t²), sin = 2t/(1 + t²) для рационального t ≈ tan(θ/2);
    знаменатель t растёт, пока угловая ошибка не станет меньше 2π/(100K).
    """
    if K < 1 or not 0 <= k < K:
        raise ParameterError(f"Индекс поворота {k} вне [0, {K})")
    if k == 0:
        return IDENTITY
    theta = 2 * math.pi * k / K
    flip = math.pi / 2 < theta <= 3 * math.pi / 2
    half = (theta - math.pi) / 2 if flip else (theta if theta <= math.pi else theta - 2 * math.pi) / 2
    tolerance = 2 * math.pi / (ROTATION_ANGLE_PRECISION * K)
    limit = 1000
    while True:
        t = Fraction(math.tan(half)).limit_denominator(limit)
        c = (1 - t * t) / (1 + t * t)
        s = 2 * t / (1 + t * t)
        if flip:
            c, s = -c, -s
        rotation = Rotation(c, s)
        if _angle_error(rotation.angle, theta) < tolerance:
            return rotation
        limit *= 10


def frame_rotation(k: int, K: int | None = None) -> Rotation:
    return snap_rotation(k, K if K is not None else settings.rotation_count)


def require_rotations(tubes: Iterable["Tube"], K: int | None = None) -> int:
    """Проверяет 0 ≤ k < K у всех трубок и возвращает K (по умолчанию из настроек)."""
    K = K if K is not None else settings.rotation_count
    bad = sorted({t.rotation for t in tubes if t.rotation >= K})
    if bad:
        raise ParameterError(f"Индексы поворота {bad} вне [0, {K})")
    return K


def require_inverse_integer(delta: Fraction) -> int:
    """Проверяет, что δ⁻¹ - целое положительное, и возвращает его."""
    if delta <= 0 or (1 / delta).denominator != 1:
        raise ParameterError(f"δ⁻¹ должно быть целым положительным, получено δ = {delta}")
    return int(1 / delta)


def dist_point_segment_sq(p: Point, seg: Segment) -> Fraction:
    """Точный квадрат расстояния от точки до замкнутого отрезка."""
    (ax, ay), (bx, by) = seg
    dx, dy = bx - ax, by - ay
    px, py = p[0] - ax, p[1] - ay
    length_sq = dx * dx + dy * dy
    if length_sq == 0:
        return px * px + py * py
    t = (px * dx + py * dy) / length_sq
    if t <= 0:
        return px * px + py * py
    if t >= 1:
        qx, qy = p[0] - bx, p[1] - by
        return qx * qx + qy * qy
    cross = px * dy - py * dx
    return cross * cross / length_sq


def clip_line(u: Fraction, v: Fraction, window: Window) -> Segment | None:
    """Часть прямой x = u + v·y внутри окна, либо None."""
    lo, hi = window.bounds
    if v == 0:
        if not lo <= u <= hi:
            return None
        y0, y1 = lo, hi
    else:
        a, b = (lo - u) / v, (hi - u) / v
        if a > b:
            a, b = b, a
        y0, y1 = max(lo, a), min(hi, b)
        if y0 > y1:
            return None
    return (u + v * y0, y0), (u + v * y1, y1)


@dataclass(frozen=True)
class Ball:
    center: Point
    radius: Fraction
    window: Window = Window.unit

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ParameterError(f"Радиус шара должен быть положительным: {self.radius}")
        lo, hi = self.window.bounds
        x, y = self.center
        if not (lo - self.radius <= x <= hi + self.radius and lo - self.radius <= y <= hi + self.radius):
            raise ParameterError(f"Центр шара {x}, {y} вне окна {self.window.value}")

    @property
    def sort_key(self) -> tuple:
        return self.window.value, self.center[0], self.center[1]


@dataclass(frozen=True)
class Tube:
    """δ-трубка вокруг прямой v·y = x − u в собственной системе координат поворота k."""

    u: Fraction
    v: Fraction
    radius: Fraction
    rotation: int = 0
    window: Window = Window.unit
    _segment: Segment | None = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ParameterError(f"Радиус трубки должен быть положительным: {self.radius}")
        if abs(self.v) > 1:
            raise ParameterError(f"Направление трубки |v| = {abs(self.v)} > 1")
        if self.rotation < 0:
            raise ParameterError(f"Отрицательный индекс поворота: {self.rotation}")
        object.__setattr__(self, "_segment", clip_line(self.u, self.v, self.window))

    @property
    def sort_key(self) -> tuple:
        return self.rotation, self.u, self.v, self.window.value

    def frame_segment(self) -> Segment | None:
        """Осевой отрезок в собственной системе, обрезанный окном."""
        return self._segment

    def core_segment(self, K: int | None = None) -> Segment | None:
        """Осевой отрезок в физических координатах."""
        seg = self._segment
        if seg is None or self.rotation == 0:
            return seg
        rot = frame_rotation(self.rotation, K)
        return rot.apply(seg[0]), rot.apply(seg[1])

    def x_at(self, y: Fraction) -> Fraction:
        return self.u + self.v * y


@dataclass(frozen=True)
class SpacingParams:
    delta: Fraction
    W: Fraction
    X: Fraction

    def __post_init__(self) -> None:
        if self.delta <= 0:
            raise ParameterError(f"δ должно быть положительным: {self.delta}")
        if not 1 <= self.W <= self.X <= 1 / self.delta:
            raise ParameterError(f"Нужно 1 ≤ W ≤ X ≤ δ⁻¹, получено W={self.W}, X={self.X}, δ={self.delta}")

    @property
    def n(self) -> int:
        return require_inverse_integer(self.delta)

    def integers(self) -> tuple[int, int]:
        """(W, X) как целые; ошибка параметров, если они не целые."""
        if self.W.denominator != 1 or self.X.denominator != 1:
            raise ParameterError(f"W и X должны быть целыми: W={self.W}, X={self.X}")
        return int(self.W), int(self.X)


@dataclass(frozen=True)
class Rect:
    lower_left: Point
    width: Fraction
    height: Fraction
    orientation: Orientation = Orientation.u_long

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ParameterError(f"Стороны прямоугольника должны быть положительными: {self.width} × {self.height}")

    def contains(self, p: Point) -> bool:
        x0, y0 = self.lower_left
        return x0 <= p[0] < x0 + self.width and y0 <= p[1] < y0 + self.height


def incident(ball: Ball, tube: Tube, K: int | None = None) -> bool:
    """Шар и замкнутая трубка пересекаются ⟺ dist(центр, осевой отрезок) ≤ 2δ."""
    if ball.radius != tube.radius:
        raise ParameterError(f"Радиусы шара и трубки различны: {ball.radius} ≠ {tube.radius}")
    seg = tube.frame_segment()
    if seg is None:
        return False
    center = ball.center
    if tube.rotation:
        center = frame_rotation(tube.rotation, K).inverse(center)
    limit = 2 * tube.radius
    return dist_point_segment_sq(center, seg) <= limit * limit


def express_in_frame(tube: Tube, k: int, K: int | None = None) -> tuple[Fraction, Fraction] | None:
    """Параметры (u, v) осевой прямой трубки в системе поворота k, если там |v| ≤ 1."""
    if tube.rotation == k:
        return tube.u, tube.v
    src = frame_rotation(tube.rotation, K)
    dst = frame_rotation(k, K)
    p0 = dst.inverse(src.apply((tube.u, ZERO)))
    dx, dy = dst.inverse_vector(src.apply_vector((tube.v, ONE)))
    if dy == 0 or abs(dx) > abs(dy):
        return None
    v = dx / dy
    return p0[0] - v * p0[1], v


def _edge_gap(a: Tube, b: Tube, k: int, K: int | None) -> Fraction | None:
    """Наибольший горизонтальный разнос осевых прямых на краях y = 0 и y = 1 системы k."""
    pa, pb = express_in_frame(a, k, K), express_in_frame(b, k, K)
    if pa is None or pb is None:
        return None
    return max(abs(pa[0] - pb[0]), abs(pa[0] + pa[1] - pb[0] - pb[1]))


def essentially_distinct(a: Ball | Tube, b: Ball | Tube, K: int | None = None) -> bool:
    """Существенная различность: пересечение не больше половины меры.

    Для шаров - точный порог расстояния центров t·δ. Для трубок - заменитель:
    трубки совпадают по существу, если в системе одной из них обе прямые
    почти вертикальны и расходятся меньше чем на δ на обоих краях окна.
    Смотрятся системы обеих трубок, а если ни одна не держит обе прямые -
    соседние с ними: почти параллельные прямые у края покрытия попадают туда вместе.
    """
    if isinstance(a, Ball) and isinstance(b, Ball):
        if a.radius != b.radius:
            raise ParameterError("Шары разного радиуса")
        dx, dy = a.center[0] - b.center[0], a.center[1] - b.center[1]
        threshold = ESSENTIAL_DISTINCTNESS_T * a.radius
        return dx * dx + dy * dy >= threshold * threshold
    if isinstance(a, Tube) and isinstance(b, Tube):
        if a.radius != b.radius:
            raise ParameterError("Трубки разного радиуса")
        K = K if K is not None else settings.rotation_count
        own = {a.rotation, b.rotation}
        gaps = [gap for k in sorted(own) if (gap := _edge_gap(a, b, k, K)) is not None]
        if not gaps:
            near = {(k + step) % K for k in own for step in (-1, 1)} - own
            gaps = [gap for k in sorted(near) if (gap := _edge_gap(a, b, k, K)) is not None]
        return all(gap >= a.radius for gap in gaps)
    raise ParameterError(f"Несравнимые типы: {type(a).__name__} и {type(b).__name__}")


def lattice_balls(delta: Fraction, step: Fraction | None = None) -> tuple[Ball, ...]:
    """Все δ-шары с центрами в step·ℤ² ∩ [0,1]², по умолчанию step = δ/2."""
    require_inverse_integer(delta)
    step = delta / 2 if step is None else step
    m = require_inverse_integer(step)
    balls = tuple(Ball((i * step, j * step), delta) for i in range(m + 1) for j in range(m + 1))
    logger.debug("Lattice at delta=%s step=%s: %d balls", delta, step, len(balls))
    return balls


def canonical_balls(balls) -> list[Ball]:
    return sorted(set(balls), key=lambda b: b.sort_key)


def canonical_tubes(tubes) -> list[Tube]:
    return sorted(set(tubes), key=lambda t: t.sort_key)


def common_radius(balls, tubes) -> Fraction | None:
    """Общий δ семейств; ошибка параметров при расхождении."""
    radii = {b.radius for b in balls} | {t.radius for t in tubes}
    if len(radii) > 1:
        raise ParameterError(f"Разные радиусы в экземпляре: {sorted(radii)}")
    return next(iter(radii), None)


_FLOAT_CONE_MARGIN = 1e-9


def direction_angle(d: Point) -> float:
    """Угол направления от вертикали против часовой стрелки."""
    return math.atan2(-d[0], d[1])


@lru_cache(maxsize=64)
def frame_angles(K: int) -> tuple[float, ...]:
    return tuple(direction_angle(snap_rotation(k, K).apply_vector((ZERO, ONE))) for k in range(K))


def in_frame(d: Point, k: int, K: int | None = None) -> bool:
    """Направление d представимо в системе k с |v| ≤ 1 (точная проверка)."""
    dx, dy = frame_rotation(k, K).inverse_vector(d)
    return dy != 0 and abs(dx) <= abs(dy)


def first_frame(d: Point, K: int | None = None) -> int | None:
    """Первая система покрытия, в которой направление d имеет |v| ≤ 1.

    Угол в плавающей точке служит только фильтром; пограничные случаи решаются точно.
    """
    K = K if K is not None else settings.rotation_count
    phi = direction_angle(d)
    quarter = math.pi / 4
    for k, theta in enumerate(frame_angles(K)):
        diff = abs((phi - theta + math.pi / 2) % math.pi - math.pi / 2)
        if diff < quarter - _FLOAT_CONE_MARGIN:
            return k
        if diff <= quarter + _FLOAT_CONE_MARGIN and in_frame(d, k, K):
            return k
    return None


def frames_cover_all(count: int, K: int) -> bool:
    """Покрывают ли конусы систем 0..count−1 все направления прямых (с запасом)."""
    if count <= 0:
        return False
    angles = sorted(a % math.pi for a in frame_angles(K)[:count])
    gaps = [b - a for a, b in zip(angles, angles[1:], strict=False)]
    gaps.append(angles[0] + math.pi - angles[-1])
    return max(gaps) < math.pi / 2 - 1e-6
