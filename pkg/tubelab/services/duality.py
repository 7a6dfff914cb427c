"""Двойственность точка-прямая и шар-трубка между физическим пространством Π₁ и
двойственным Π₂, покрытие поворотами и перенос условий разреженности.

l₁(u, v): v·y = x − u    (точка Π₂ → прямая Π₁)
l₂(x, y): u = x − v·y    (точка Π₁ → прямая Π₂)
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from tubelab.config import settings
from tubelab.constants import DUALITY_BISECTION_DEPTH
from tubelab.exceptions import InvariantViolation, ParameterError
from tubelab.services.geometry import (
    Ball,
    Orientation,
    Point,
    Rotation,
    SpacingParams,
    Tube,
    Window,
    express_in_frame,
    first_frame,
    frame_rotation,
)
from tubelab.services.incidence import GridSpacingReport, verify_ball_grid_spacing

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DualPoint:
    """Точка (u, v) двойственного пространства; задаёт прямую l₁(u, v)."""

    u: Fraction
    v: Fraction

    def __post_init__(self) -> None:
        if not Window.dual.contains((self.u, self.v)):
            raise ParameterError(f"Двойственная точка ({self.u}, {self.v}) вне [−2, 2]²")

    def contains(self, p: Point) -> bool:
        """p ∈ l₁(u, v)."""
        return self.v * p[1] == p[0] - self.u


@dataclass(frozen=True)
class DualLine:
    """Прямая l₂(x₀, y₀): u = x₀ − v·y₀ в карте (v, u)."""

    x0: Fraction
    y0: Fraction

    @property
    def slope(self) -> Fraction:
        return -self.y0

    def contains(self, q: Point) -> bool:
        """(u, v) ∈ l₂(x₀, y₀)."""
        return q[0] == self.x0 - q[1] * self.y0


@dataclass(frozen=True)
class RotationCover:
    """ρ_k - поворот на ≈ 2πk/K вокруг (1/2, 1/2) с точными рациональными (cos, sin)."""

    K: int = 100

    def __post_init__(self) -> None:
        if self.K < 4:
            raise ParameterError(f"Покрытию нужно K ≥ 4, получено {self.K}")

    @classmethod
    def from_settings(cls) -> "RotationCover":
        return cls(settings.rotation_count)

    def rho(self, k: int) -> Rotation:
        return frame_rotation(k, self.K)

    def frame_of(self, direction: Point) -> int | None:
        return first_frame(direction, self.K)

    def to_frame(self, p: Point, k: int) -> Point:
        """Координаты физической точки p в системе ρ_k."""
        return self.rho(k).inverse(p)

    def from_frame(self, p: Point, k: int) -> Point:
        return self.rho(k).apply(p)


@dataclass(frozen=True)
class IncidenceCheck:
    phys: bool
    dual: bool

    @property
    def equal(self) -> bool:
        return self.phys == self.dual


@dataclass(frozen=True)
class TransferResult:
    balls: tuple[Ball, ...]
    report: GridSpacingReport

    @property
    def passed(self) -> bool:
        return self.report.passed


def l1_of_ball(b: Ball) -> Tube:
    """Трубка Π₁ вокруг l₁(центр b), окно [−2, 2]²."""
    u0, v0 = b.center
    if abs(v0) > 1:
        raise ParameterError(f"Шар с v = {v0} не задаёт трубку с |v| ≤ 1")
    return Tube(u0, v0, b.radius, 0, Window.dual)


def l2_of_ball(b: Ball) -> Tube:
    """Трубка Π₂ вокруг l₂(центр b): в карте (u, v) это u = x₀ + (−y₀)·v."""
    x0, y0 = b.center
    if abs(y0) > 1:
        raise ParameterError(f"Шар с y = {y0} не задаёт двойственную трубку с |v| ≤ 1")
    return Tube(x0, -y0, b.radius, 0, Window.dual)


def l1_inverse(tube: Tube) -> Ball:
    """Двойственный шар трубки из 𝕋₁: центр (u, v)."""
    if tube.rotation != 0:
        raise ParameterError(f"Трубка вне 𝕋₁: индекс поворота {tube.rotation}")
    return Ball((tube.u, tube.v), tube.radius, Window.dual)


def l2_inverse(tube: Tube) -> Ball:
    """Шар Π₁, образом которого служит двойственная трубка u = x₀ − v·y₀."""
    if tube.rotation != 0:
        raise ParameterError(f"Двойственная трубка с поворотом {tube.rotation}")
    return Ball((tube.u, -tube.v), tube.radius, Window.dual)


def point_in_l1_image(p: Point, b: Ball) -> bool:
    """p ∈ l₁(B) ⟺ прямая l₂(p) пересекает диск B ⟺ |pₓ − u₀ − v₀·p_y| ≤ δ·√(1 + p_y²)."""
    u0, v0 = b.center
    offset = p[0] - u0 - v0 * p[1]
    return offset * offset <= b.radius * b.radius * (1 + p[1] * p[1])


def point_in_l2_image(q: Point, b: Ball) -> bool:
    """(u, v) ∈ l₂(B) ⟺ прямая l₁(u, v) пересекает диск B."""
    x0, y0 = b.center
    offset = q[0] - x0 + q[1] * y0
    return offset * offset <= b.radius * b.radius * (1 + q[1] * q[1])


def _within_sum_of_roots(g2: Fraction, p: Fraction, q: Fraction) -> bool:
    """√g2 ≤ √p + √q в точной арифметике (q ≥ 0)."""
    if p < 0:
        return False
    excess = g2 - p - q
    return excess <= 0 or excess * excess <= 4 * p * q


def _band_meets(offset: Fraction, slope: Fraction, center: Fraction, delta: Fraction) -> bool:
    """Есть ли t ∈ [center − δ, center + δ] с |offset − slope·t| ≤ √(δ² − (t − center)²) + δ·√(1 + t²).

    Бисекция по t: отрезок отбрасывается, когда даже min|g| не достаётся суммой
    максимумов корней; точка-свидетель проверяется точно. Нерешённый за
    DUALITY_BISECTION_DEPTH шагов отрезок - касание, считается встречей.
    """

    def holds(t: Fraction) -> bool:
        g = offset - slope * t
        return _within_sum_of_roots(g * g, delta * delta - (t - center) ** 2, delta * delta * (1 + t * t))

    def possible(lo: Fraction, hi: Fraction) -> bool:
        g_lo, g_hi = offset - slope * lo, offset - slope * hi
        g_min = Fraction(0) if (g_lo <= 0) != (g_hi <= 0) else min(abs(g_lo), abs(g_hi))
        nearest = Fraction(0) if lo <= center <= hi else min(abs(lo - center), abs(hi - center))
        t_far = max(abs(lo), abs(hi))
        return _within_sum_of_roots(g_min * g_min, delta * delta - nearest**2, delta * delta * (1 + t_far * t_far))

    pending = [(center - delta, center + delta)]
    for _ in range(DUALITY_BISECTION_DEPTH):
        refined = []
        for lo, hi in pending:
            if not possible(lo, hi):
                continue
            mid = (lo + hi) / 2
            if holds(mid) or holds(lo) or holds(hi):
                return True
            refined += [(lo, mid), (mid, hi)]
        if not refined:
            return False
        pending = refined
    logger.debug("Tangent contact undecided after %d halvings: offset=%s", DUALITY_BISECTION_DEPTH, offset)
    return True


def meets_l1_image(b1: Ball, b2: Ball) -> bool:
    """Шар Π₁ встречает l₁(b2) = ⋃ l₁(q), q ∈ b2: есть p ∈ b1 с прямой l₂(p) через b2. Перебор по p_y."""
    if b1.radius != b2.radius:
        raise ParameterError(f"Разные δ: {b1.radius} и {b2.radius}")
    x1, y1 = b1.center
    u2, v2 = b2.center
    return _band_meets(x1 - u2, v2, y1, b1.radius)


def meets_l2_image(b2: Ball, b1: Ball) -> bool:
    """Шар Π₂ встречает l₂(b1): есть q ∈ b2 с прямой l₁(q) через b1. Перебор по q_v."""
    if b1.radius != b2.radius:
        raise ParameterError(f"Разные δ: {b1.radius} и {b2.radius}")
    u2, v2 = b2.center
    x1, y1 = b1.center
    return _band_meets(x1 - u2, y1, v2, b2.radius)


def incidence_preserved(b1: Ball, b2: Ball) -> IncidenceCheck:
    if b1.radius != b2.radius:
        raise ParameterError(f"Разные δ: {b1.radius} и {b2.radius}")
    check = IncidenceCheck(phys=meets_l1_image(b1, b2), dual=meets_l2_image(b2, b1))
    if not check.equal:
        logger.error("Duality mismatch for %s and %s", b1.center, b2.center)
    return check


def transfer_spacing(
    tubes: Iterable[Tube], params: SpacingParams, orientation: Orientation = Orientation.u_long
) -> TransferResult:
    """Переносит трубки 𝕋₁ в двойственные шары и проверяет сетку клеток.

    u_long - условие разреженности направлений (клетки W⁻¹ × X⁻¹, длинная сторона по u);
    v_long - условие разреженности положений (клетки X⁻¹ × W⁻¹, длинная сторона по v).
    """
    balls = tuple(l1_inverse(t) for t in tubes)
    report = verify_ball_grid_spacing(balls, params, orientation)
    logger.info("Spacing transfer (%s): %d balls, passed=%s", orientation.value, len(balls), report.passed)
    return TransferResult(balls=balls, report=report)


def rotation_partition(tubes: Iterable[Tube], cover: RotationCover) -> list[list[Tube]]:
    """Раскладывает трубки по первой системе ρ_k, где они лежат в 𝕋₁; трубки пересчитываются в ней."""
    families: list[list[Tube]] = [[] for _ in range(cover.K)]
    for tube in tubes:
        direction = frame_rotation(tube.rotation, cover.K).apply_vector((tube.v, Fraction(1)))
        k = cover.frame_of(direction)
        coords = express_in_frame(tube, k, cover.K) if k is not None else None
        if k is None or coords is None:
            raise InvariantViolation(f"Покрытие K={cover.K} не содержит трубку {tube}")
        u, v = coords
        families[k].append(Tube(u, v, tube.radius, k, tube.window))
    return families


def tube_through(p: Point, q: Point, delta: Fraction, cover: RotationCover | None = None) -> Tube:
    """Трубка через две точки, записанная в первой покрывающей системе."""
    cover = cover or RotationCover.from_settings()
    direction = (q[0] - p[0], q[1] - p[1])
    if direction == (0, 0):
        raise ParameterError("Трубка через совпадающие точки")
    k = cover.frame_of(direction)
    if k is None:
        raise InvariantViolation(f"Покрытие K={cover.K} не содержит направление {direction}")
    px, py = cover.to_frame(p, k)
    dx, dy = cover.rho(k).inverse_vector(direction)
    v = dx / dy
    return Tube(px - v * py, v, delta, k)
