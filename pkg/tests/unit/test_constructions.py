import logging
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tubelab.exceptions import ParameterError
from tubelab.services.constructions import (
    SWindow,
    build_case1,
    build_case2,
    build_furst_intersected,
    build_furst_sqrt2,
    build_furst_strips,
    enumerate_s,
    extended_gcd,
    grid_tubes,
    linear_solutions,
    min_separation_sq,
    random_grid_balls,
    sqrt2_convergent,
    sqrt2_richness,
    sqrt2_separation_holds,
    sqrt_convergents,
    strip_positions,
)
from tubelab.services.geometry import Ball, SpacingParams, incident
from tubelab.services.incidence import rich_balls, verify_ball_grid_spacing, verify_tube_spacing

F = Fraction


class TestIntegerHelpers:
    @given(st.integers(1, 10_000), st.integers(1, 10_000))
    def test_extended_gcd(self, a, b):
        g, x, y = extended_gcd(a, b)
        assert a * x + b * y == g
        assert a % g == 0 and b % g == 0

    def test_linear_solutions_example(self):
        assert linear_solutions(2, 3, 12, 10, 10) == [(0, 6), (2, 3), (4, 0)]

    def test_no_solutions_when_gcd_does_not_divide(self):
        assert linear_solutions(2, 4, 3, 10, 10) == []

    @given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 60), st.integers(0, 15), st.integers(0, 15))
    @settings(max_examples=200)
    def test_linear_solutions_exhaustive(self, A, B, c, a_max, b_max):
        """Совпадает с перебором по прямоугольнику."""
        expected = [(a, b) for a in range(a_max + 1) for b in range(b_max + 1) if A * b + B * a == c]
        assert linear_solutions(A, B, c, a_max, b_max) == expected

    def test_linear_solutions_rejects_zero(self):
        with pytest.raises(ParameterError):
            linear_solutions(0, 1, 1, 1, 1)


class TestSqrt2:
    def test_convergents(self):
        gen = sqrt_convergents(2)
        assert [next(gen) for _ in range(5)] == [F(1), F(3, 2), F(7, 5), F(17, 12), F(41, 29)]

    def test_square_rejected(self):
        with pytest.raises(ParameterError):
            next(sqrt_convergents(9))

    @pytest.mark.parametrize("m", [1, 4, 8, 16, 64])
    def test_convergent_denominator_and_separation(self, m):
        rho = sqrt2_convergent(m)
        assert rho.denominator >= 10 * m
        assert sqrt2_separation_holds(rho, m)

    def test_known_value(self):
        assert sqrt2_convergent(4) == F(99, 70)

    def test_rational_slope_fails_separation(self):
        assert not sqrt2_separation_holds(F(3, 2), 4)

    def test_richness_exact_at_boundary(self):
        """(δ^α·XW)^{1/2} = 2 ровно при δ = 1/256, α = 1/4, XW = 16."""
        assert sqrt2_richness(F(1, 256), F(1, 4), 4, 4) == 2
        assert sqrt2_richness(F(1, 256), F(3, 4), 4, 4) == 0


class TestSeparation:
    def test_min_separation(self):
        assert min_separation_sq([(F(0), F(0)), (F(1), F(0)), (F(0), F(1, 2))]) == F(1, 4)

    def test_single_point(self):
        assert min_separation_sq([(F(0), F(0))]) is None

    @given(st.lists(st.tuples(st.integers(0, 12), st.integers(0, 6)), min_size=2, max_size=30))
    def test_matches_all_pairs(self, raw):
        points = [(F(x, 12), F(y, 6)) for x, y in raw]
        expected = min(
            (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 for i, a in enumerate(points) for b in points[i + 1 :]
        )
        assert min_separation_sq(points) == expected


class TestCase1:
    def test_points_lie_on_solution_lines(self):
        """Каждое решение (a, b) даёт прямую решётки, проходящую через точку точно."""
        example = build_case1(F(1, 64), 16, 16, 8, window=SWindow(cap=F(1)))
        W, X = 16, 16
        assert example.fractions == (F(1, 2),)
        assert len(example.points) == 33
        for pt in example.points:
            x, y = pt.point
            assert len(pt.solutions) >= example.min_solutions
            for a, b in pt.solutions:
                assert x == F(a, W) + (F(b, X) - F(a, W)) * y

    def test_rich_points_meet_tubes(self):
        example = build_case1(F(1, 64), 16, 16, 8, window=SWindow(cap=F(1)))
        for pt, ball in zip(example.points, example.balls, strict=True):
            assert sum(1 for t in example.tubes if incident(ball, t)) >= len(pt.solutions)

    def test_separation_with_unit_cap(self):
        """При cap = 1 и r < W точки разнесены на ≥ r/(XW)."""
        W, X, r = 16, 16, 8
        example = build_case1(F(1, 64), W, X, r, window=SWindow(cap=F(1)))
        separation = min_separation_sq([pt.point for pt in example.points])
        assert separation >= F(r, X * W) ** 2

    def test_fraction_window(self):
        """Окно по умолчанию: 1/4 ≤ p/q ≤ 3/4, X/(100r) ≤ p, q ≤ 100X/r, (X/W) | p."""
        window = SWindow()
        X, W, r = 64, 4, 4
        fractions = enumerate_s(X, W, r, window)
        assert fractions
        for frac in fractions:
            assert window.lower <= frac <= window.upper
            assert frac.numerator % (X // W) == 0
            assert F(X, 100 * r) <= frac.numerator < frac.denominator <= 100 * X // r

    def test_separation_bound_at_unit_cap(self):
        example = build_case1(F(1, 64), 16, 16, 8, window=SWindow(cap=F(1)))
        assert example.separation_bound == F(8, 16 * 16)

    def test_cardinality_stable_across_sweep(self):
        """W ∈ {2, 4}, X ∈ {8, 16}, r ∈ {2, 4}: |точек|·r³/(W²X²) в окне с отношением ≤ 16."""
        window = SWindow(cap=F(4))
        ratios = []
        for W in (2, 4):
            for X in (8, 16):
                for r in (2, 4):
                    delta = F(1, max(256, 4 * W * X // r))
                    example = build_case1(delta, W, X, r, window=window)
                    assert min_separation_sq([pt.point for pt in example.points]) >= example.separation_bound**2
                    ratios.append(example.cardinality_ratio)
        assert min(ratios) > 0
        assert max(ratios) / min(ratios) <= 16

    @pytest.mark.slow
    def test_default_window(self):
        """Окно из настроек (cap = 100): точный счёт и разнесение ≥ r/(100·XW)·(r/100)."""
        W, X, r = 4, 4, 3
        example = build_case1(F(1, 64), W, X, r)
        assert example.window == SWindow()
        assert len(example.fractions) == 2715
        assert len(example.points) == 67803
        assert example.separation_bound == F(r * r, 100 * 100 * X * W)
        assert min_separation_sq([pt.point for pt in example.points]) >= example.separation_bound**2
        for pt in example.points[::97]:
            x, y = pt.point
            assert len(pt.solutions) >= example.min_solutions
            for a, b in pt.solutions:
                assert x == F(a, W) + (F(b, X) - F(a, W)) * y

    def test_default_min_solutions(self):
        example = build_case1(F(1, 64), 4, 8, 2, window=SWindow(cap=F(1)))
        assert example.min_solutions == 1

    def test_outside_sharp_regime_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            build_case1(F(1, 64), 2, 4, 2, window=SWindow(cap=F(1)))
        assert "r < W" in caplog.text

    @pytest.mark.parametrize(
        ("W", "X", "r", "match"),
        [(3, 8, 4, "делить"), (4, 8, 1, "r ≥ 2"), (8, 64, 8, "δ·W·X")],
    )
    def test_invalid_parameters(self, W, X, r, match):
        with pytest.raises(ParameterError, match=match):
            build_case1(F(1, 64), W, X, r)


class TestCase2:
    def test_bush_apexes_are_rich(self):
        delta = F(1, 256)
        example = build_case2(delta, 2, 16, 4)
        assert len(example.apexes) == 3
        assert len(example.tubes) == 48
        assert example.cluster_radius == F(121, 768)
        for apex in example.apexes:
            ball = Ball(apex, delta)
            assert sum(1 for t in example.tubes if incident(ball, t)) >= example.r

    def test_bush_tubes_are_spaced(self):
        """Каждый куст - X направлений с шагом 1/X."""
        example = build_case2(F(1, 256), 2, 16, 4)
        for bush in example.bushes:
            directions = sorted(t.v for t in bush)
            assert all(b - a == F(1, 16) for a, b in zip(directions, directions[1:], strict=False))

    def test_requires_w_below_r(self):
        with pytest.raises(ParameterError, match="W < r"):
            build_case2(F(1, 256), 4, 16, 4)

    def test_rich_ball_outside_cluster_misses_bush(self):
        """На границе радиуса кластера над вершиной шар встречает меньше r трубок."""
        delta = F(1, 256)
        example = build_case2(delta, 2, 16, 4)
        apex = example.apexes[1]
        ball = Ball((apex[0], example.cluster_radius), delta)
        assert sum(1 for t in example.tubes if incident(ball, t)) < example.r

    @pytest.mark.slow
    @pytest.mark.parametrize(("W", "X", "r"), [(1, 8, 4), (2, 16, 4), (2, 16, 8)])
    def test_rich_balls_cluster_at_apexes(self, W, X, r):
        """Решётка шага δ: все богатые шары у вершин, |B_r| в пределах 2 от 8(W + 1)(X/r)²."""
        delta = F(1, 256)
        example = build_case2(delta, W, X, r)
        rich = rich_balls(example.tubes, r, delta=delta, step=delta)
        radius_sq = example.cluster_radius**2
        for ball in rich.members:
            nearest = min((ball.center[0] - a[0]) ** 2 + (ball.center[1] - a[1]) ** 2 for a in example.apexes)
            assert nearest <= radius_sq
        assert example.expected_rich / 2 <= len(rich.members) <= 2 * example.expected_rich
        # в сравнении с W·X²/r² это постоянный множитель 8(W + 1)/W
        assert len(rich.members) >= W * X * X // (r * r)


class TestStrips:
    def test_positions(self):
        starts = strip_positions(F(1, 64), F(1, 2))
        assert len(starts) == 8
        assert all(b - a == F(9, 64) for a, b in zip(starts, starts[1:], strict=False))
        assert starts[-1] + F(1, 64) <= 1

    def test_alpha_range(self):
        with pytest.raises(ParameterError):
            strip_positions(F(1, 64), F(1))

    def test_witnesses_on_strips(self):
        delta = F(1, 64)
        example = build_furst_strips(delta, F(1, 2))
        balls = set(example.balls)
        assert len(example.tubes) == 65
        assert example.witness_gap == F(9, 64)
        for tube, ys in example.witnesses.items():
            assert len(ys) == 8
            for ball in ys:
                assert ball in balls
                assert incident(ball, tube)

    def test_intersected_witnesses(self):
        delta = F(1, 64)
        example = build_furst_intersected(delta, F(1, 2), 2, 4)
        balls = set(example.balls)
        assert example.case == "strips_tubes"
        assert len(example.tubes) == 15
        for tube, ys in example.witnesses.items():
            for ball in ys:
                assert ball in balls
                assert incident(ball, tube)


class TestSqrt2Family:
    def test_small_family(self):
        delta = F(1, 256)
        example = build_furst_sqrt2(delta, F(1, 4), 4, 4)
        assert example.case == "sqrt2"
        assert example.r == 2
        assert example.rho == F(99, 70)
        assert example.intervals == (F(1, 2),)
        assert len(example.balls) == 9
        assert example.spacing_report.passed
        for tube, ys in example.witnesses.items():
            for ball in ys:
                assert incident(ball, tube)

    def test_spacing_witness_is_checked_with_slack(self):
        delta = F(1, 256)
        example = build_furst_sqrt2(delta, F(1, 4), 4, 4)
        report = verify_tube_spacing(example.spacing_tubes, example.params, slack=4)
        assert report == example.spacing_report

    def test_degenerate_falls_back(self, caplog):
        with caplog.at_level(logging.WARNING):
            example = build_furst_sqrt2(F(1, 256), F(3, 4), 4, 4)
        assert example.case == "strips_tubes"
        assert example.notes
        assert "falling back" in caplog.text

    def test_requires_squares(self):
        with pytest.raises(ParameterError, match="квадратами"):
            build_furst_sqrt2(F(1, 256), F(1, 4), 8, 2)


class TestRandomInstances:
    def test_grid_balls_spaced(self, rng):
        params = SpacingParams(F(1, 64), F(4), F(16))
        balls = random_grid_balls(params, rng)
        assert balls
        assert verify_ball_grid_spacing(balls, params).passed

    def test_grid_tubes_count(self):
        assert len(grid_tubes(F(1, 64), 2, 4)) == 15
