import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tubelab.exceptions import ParameterError
from tubelab.services.constructions import random_balls, random_tubes
from tubelab.services.duality import RotationCover, tube_through
from tubelab.services.geometry import (
    ESSENTIAL_DISTINCTNESS_T,
    Ball,
    Orientation,
    Rect,
    SpacingParams,
    Tube,
    Window,
    canonical_balls,
    canonical_tubes,
    clip_line,
    common_radius,
    dist_point_segment_sq,
    essentially_distinct,
    express_in_frame,
    first_frame,
    frames_cover_all,
    in_frame,
    incident,
    lattice_balls,
    require_inverse_integer,
    snap_rotation,
)

DELTA = Fraction(1, 64)
F = Fraction


def unit_fractions(denominator: int = 256):
    return st.integers(min_value=0, max_value=denominator).map(lambda i: F(i, denominator))


class TestBallAndTube:
    def test_ball_outside_window_rejected(self):
        with pytest.raises(ParameterError, match="вне окна"):
            Ball((F(2), F(1, 2)), DELTA)

    def test_ball_within_radius_of_window_allowed(self):
        """Центр может выходить за окно не дальше δ."""
        assert Ball((-DELTA, F(0)), DELTA).center == (-DELTA, F(0))

    def test_dual_window_ball(self):
        assert Ball((F(-2), F(3, 2)), DELTA, Window.dual).window is Window.dual

    def test_nonpositive_radius_rejected(self):
        with pytest.raises(ParameterError):
            Ball((F(0), F(0)), F(0))

    def test_steep_tube_rejected(self):
        with pytest.raises(ParameterError, match="> 1"):
            Tube(F(0), F(3, 2), DELTA)

    def test_negative_rotation_rejected(self):
        with pytest.raises(ParameterError):
            Tube(F(0), F(0), DELTA, -1)

    def test_frame_segment_clipped(self):
        """x = y в [0, 1]² - диагональ."""
        assert Tube(F(0), F(1), DELTA).frame_segment() == ((F(0), F(0)), (F(1), F(1)))

    def test_tube_missing_window_has_no_core(self):
        """Прямая вне окна ничего не пересекает."""
        tube = Tube(F(3), F(0), DELTA)
        assert tube.core_segment() is None
        assert not incident(Ball((F(1), F(1, 2)), DELTA), tube)

    def test_x_at(self):
        assert Tube(F(1, 4), F(1, 2), DELTA).x_at(F(1, 2)) == F(1, 2)


class TestClipAndDistance:
    def test_clip_vertical(self):
        assert clip_line(F(1, 2), F(0), Window.unit) == ((F(1, 2), F(0)), (F(1, 2), F(1)))

    def test_clip_misses(self):
        assert clip_line(F(2), F(0), Window.unit) is None

    def test_clip_partial(self):
        """x = 1/2 + y выходит из окна при y = 1/2."""
        assert clip_line(F(1, 2), F(1), Window.unit) == ((F(1, 2), F(0)), (F(1), F(1, 2)))

    def test_distance_to_interior(self):
        seg = ((F(0), F(0)), (F(0), F(1)))
        assert dist_point_segment_sq((F(1, 4), F(1, 2)), seg) == F(1, 16)

    def test_distance_to_endpoint(self):
        seg = ((F(0), F(0)), (F(0), F(1)))
        assert dist_point_segment_sq((F(3), F(5)), seg) == F(9 + 16)

    def test_degenerate_segment(self):
        seg = ((F(1), F(1)), (F(1), F(1)))
        assert dist_point_segment_sq((F(0), F(1)), seg) == 1


class TestIncidence:
    def test_boundary_is_incident(self):
        """Расстояние ровно 2δ - инцидентны (замкнутые множества)."""
        tube = Tube(F(1, 2), F(0), DELTA)
        assert incident(Ball((F(1, 2) + 2 * DELTA, F(1, 2)), DELTA), tube)

    def test_just_outside(self):
        tube = Tube(F(1, 2), F(0), DELTA)
        assert not incident(Ball((F(1, 2) + 2 * DELTA + F(1, 10**6), F(1, 2)), DELTA), tube)

    def test_beyond_segment_end(self):
        """Шар над концом отрезка: расстояние до конца, а не до прямой."""
        tube = Tube(F(1, 2), F(0), DELTA)
        assert not incident(Ball((F(1, 2), F(1) + 3 * DELTA), DELTA, Window.dual), tube)

    def test_radius_mismatch(self):
        with pytest.raises(ParameterError):
            incident(Ball((F(0), F(0)), DELTA), Tube(F(0), F(0), DELTA / 2))

    def test_rotated_tube(self):
        """Вертикальная трубка в системе k проходит через образы своих точек."""
        K = 8
        tube = Tube(F(1, 2), F(0), DELTA, 1)
        seg = tube.core_segment(K)
        mid = ((seg[0][0] + seg[1][0]) / 2, (seg[0][1] + seg[1][1]) / 2)
        assert incident(Ball(mid, DELTA), tube, K)

    def test_incidence_monotone_in_radius(self, rng):
        """Инцидентность при δ сохраняется при 2δ для тех же центра и прямой."""
        K = 8
        balls = random_balls(DELTA, 100, rng)
        tubes = random_tubes(DELTA, 30, rng, K=K)
        for tube in tubes:
            wide = Tube(tube.u, tube.v, 2 * DELTA, tube.rotation)
            for ball in balls:
                if incident(ball, tube, K):
                    assert incident(Ball(ball.center, 2 * DELTA), wide, K)


def _float_dist_sq(point, seg) -> float:
    p, a, b = (np.array([float(c) for c in xy]) for xy in (point, *seg))
    d = b - a
    length_sq = float(d @ d)
    t = 0.0 if length_sq == 0 else float(np.clip((p - a) @ d / length_sq, 0.0, 1.0))
    e = p - (a + t * d)
    return float(e @ e)


class TestFloatAgreement:
    def test_incidence_agrees_with_floats(self, rng):
        """Точный предикат и float64 совпадают, когда запас больше 2⁻³⁰."""
        K = 8
        balls = random_balls(DELTA, 150, rng)
        tubes = random_tubes(DELTA, 40, rng, K=K)
        checked = 0
        for tube in tubes:
            seg = tube.core_segment(K)
            for ball in balls:
                exact = incident(ball, tube, K)
                if seg is None:
                    assert not exact
                    continue
                margin = _float_dist_sq(ball.center, seg) - float(2 * DELTA) ** 2
                if abs(margin) > 2**-30:
                    assert exact == (margin < 0)
                    checked += 1
        assert checked > 0

    @given(unit_fractions(), unit_fractions(), unit_fractions(), unit_fractions())
    def test_ball_distinctness_agrees_with_floats(self, x1, y1, x2, y2):
        a, b = Ball((x1, y1), DELTA), Ball((x2, y2), DELTA)
        margin = math.hypot(float(x1 - x2), float(y1 - y2)) - float(ESSENTIAL_DISTINCTNESS_T * DELTA)
        if abs(margin) > 2**-30:
            assert essentially_distinct(a, b) == (margin > 0)


class TestRotations:
    @pytest.mark.parametrize("K", [4, 8, 100])
    def test_pythagorean_and_accurate(self, K):
        """cos² + sin² = 1 точно, ошибка угла < 2π/(100K)."""
        for k in range(K):
            rot = snap_rotation(k, K)
            assert rot.cos**2 + rot.sin**2 == 1
            expected = 2 * math.pi * k / K
            error = abs((rot.angle - expected + math.pi) % (2 * math.pi) - math.pi)
            assert error < 2 * math.pi / (100 * K)

    def test_index_out_of_range(self):
        with pytest.raises(ParameterError):
            snap_rotation(5, 4)

    def test_inverse_undoes_apply(self):
        rot = snap_rotation(3, 16)
        p = (F(1, 3), F(2, 7))
        assert rot.inverse(rot.apply(p)) == p

    def test_frames_cover_all_directions(self):
        assert frames_cover_all(100, 100)
        assert not frames_cover_all(1, 100)

    @given(st.integers(-50, 50), st.integers(-50, 50))
    @settings(max_examples=60)
    def test_first_frame_is_first(self, dx, dy):
        """Первая система содержит направление, предыдущие - нет."""
        if dx == 0 and dy == 0:
            return
        K = 16
        d = (F(dx), F(dy))
        k = first_frame(d, K)
        assert k is not None
        assert in_frame(d, k, K)
        assert not any(in_frame(d, j, K) for j in range(k))

    def test_express_in_own_frame(self):
        tube = Tube(F(1, 3), F(1, 5), DELTA, 2)
        assert express_in_frame(tube, 2, 8) == (F(1, 3), F(1, 5))


class TestEssentialDistinctness:
    def test_threshold_between_half_and_one(self):
        """Порог половины площади t ≈ 0.808."""
        assert F(4, 5) < ESSENTIAL_DISTINCTNESS_T < F(41, 50)

    def test_balls_delta_apart_distinct(self):
        a, b = Ball((F(1, 2), F(1, 2)), DELTA), Ball((F(1, 2) + DELTA, F(1, 2)), DELTA)
        assert essentially_distinct(a, b)

    def test_half_lattice_neighbours_not_distinct(self):
        """Соседи решётки δ/2 перекрываются больше чем наполовину."""
        a, b = Ball((F(1, 2), F(1, 2)), DELTA), Ball((F(1, 2) + DELTA / 2, F(1, 2)), DELTA)
        assert not essentially_distinct(a, b)

    def test_tubes_separated_at_top(self):
        a, b = Tube(F(1, 2), F(0), DELTA), Tube(F(1, 2), DELTA, DELTA)
        assert essentially_distinct(a, b)

    def test_tubes_close_everywhere(self):
        a, b = Tube(F(1, 2), F(0), DELTA), Tube(F(1, 2) + DELTA / 2, F(0), DELTA)
        assert not essentially_distinct(a, b)

    def test_mixed_types_rejected(self):
        with pytest.raises(ParameterError):
            essentially_distinct(Ball((F(0), F(0)), DELTA), Tube(F(0), F(0), DELTA))

    @pytest.mark.parametrize(
        ("s", "distinct"), [(F(1, 2), False), (F(7, 10), False), (F(9, 10), True), (F(6, 5), True)]
    )
    def test_ball_overlap_matches_monte_carlo(self, rng, s, distinct):
        """Доля площади шара внутри соседа на расстоянии s·δ: меньше 1/2 ⟺ существенно различны."""
        a, b = Ball((F(1, 2), F(1, 2)), DELTA), Ball((F(1, 2) + s * DELTA, F(1, 2)), DELTA)
        assert essentially_distinct(a, b) == distinct
        n = 200_000
        radius, angle = np.sqrt(rng.random(n)), 2 * np.pi * rng.random(n)
        inside = np.hypot(radius * np.cos(angle) - float(s), radius * np.sin(angle)) <= 1.0
        overlap = float(inside.mean())
        h = float(s) / 2
        lens = (2 * math.acos(h) - 2 * h * math.sqrt(1 - h * h)) / math.pi
        assert overlap == pytest.approx(lens, abs=0.01)
        assert (overlap <= 0.5) == distinct

    def test_tube_relation_symmetric_across_frames(self):
        """Почти параллельные трубки в разных системах: ответ не зависит от порядка."""
        cover = RotationCover(100)
        a = Tube(F(0), F(1), DELTA, 0)
        b = tube_through((F(0), F(0)), (F(1001, 1000), F(1)), DELTA, cover)
        assert b.rotation != 0
        assert essentially_distinct(a, b, 100) == essentially_distinct(b, a, 100)
        assert not essentially_distinct(a, b, 100)

    @given(unit_fractions(64), unit_fractions(64), unit_fractions(64), unit_fractions(64), st.integers(1, 8))
    @settings(max_examples=100)
    def test_tube_relation_symmetric(self, x1, y1, x2, y2, shift):
        """Трубки через близкие пары точек, записанные каждая в своей системе."""
        moved = (x1 + shift * DELTA / 8, y1)
        if (x2, y2) in ((x1, y1), moved):
            return
        cover = RotationCover(100)
        a = tube_through((x1, y1), (x2, y2), DELTA, cover)
        b = tube_through(moved, (x2, y2), DELTA, cover)
        assert essentially_distinct(a, b, 100) == essentially_distinct(b, a, 100)

    @given(unit_fractions(), unit_fractions(), unit_fractions(), unit_fractions())
    def test_ball_relation_symmetric(self, x1, y1, x2, y2):
        a, b = Ball((x1, y1), DELTA), Ball((x2, y2), DELTA)
        assert essentially_distinct(a, b) == essentially_distinct(b, a)


class TestLattice:
    def test_default_step_is_half_delta(self):
        """δ = 1/4: шаг 1/8, 9 × 9 центров."""
        assert len(lattice_balls(F(1, 4))) == 81

    def test_step_delta_lattice_is_distinct(self):
        balls = lattice_balls(F(1, 4), step=F(1, 4))
        assert len(balls) == 25
        assert all(essentially_distinct(a, b) for a in balls for b in balls if a != b)

    def test_non_integer_inverse_rejected(self):
        with pytest.raises(ParameterError, match="целым"):
            require_inverse_integer(F(2, 3))


class TestCanonicalOrder:
    def test_tubes_sorted_by_rotation_then_u_v(self):
        t1, t2, t3 = Tube(F(1, 2), F(0), DELTA, 1), Tube(F(1, 4), F(1, 2), DELTA), Tube(F(1, 4), F(0), DELTA)
        assert canonical_tubes([t1, t2, t3, t2]) == [t3, t2, t1]

    def test_balls_deduplicated(self):
        b = Ball((F(0), F(0)), DELTA)
        assert canonical_balls([b, b]) == [b]

    def test_common_radius_mismatch(self):
        with pytest.raises(ParameterError, match="Разные радиусы"):
            common_radius([Ball((F(0), F(0)), DELTA)], [Tube(F(0), F(0), DELTA / 2)])

    def test_common_radius_empty(self):
        assert common_radius([], []) is None


class TestParamsAndRect:
    def test_spacing_params_order(self):
        with pytest.raises(ParameterError, match="W ≤ X"):
            SpacingParams(DELTA, F(8), F(4))

    def test_x_at_most_inverse_delta(self):
        with pytest.raises(ParameterError):
            SpacingParams(F(1, 4), F(2), F(8))

    def test_integers(self):
        assert SpacingParams(DELTA, F(2), F(4)).integers() == (2, 4)

    def test_rect_half_open(self):
        rect = Rect((F(0), F(0)), F(1, 2), F(1, 4), Orientation.u_long)
        assert rect.contains((F(0), F(0)))
        assert not rect.contains((F(1, 2), F(0)))
        assert not rect.contains((F(0), F(1, 4)))
