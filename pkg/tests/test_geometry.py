import numpy as np
import pytest

from coopplan import (DegenerateGeometryError, build_path, collision_zone,
                      eval_path)
from coopplan.geometry import footprints_overlap

from conftest import random_gentle_path


class TestBuildPath:
    def test_straight_line_arclength(self):
        p = build_path([(0.0, 0.0), (100.0, 0.0)], 2.0, 4.0, 2.0)
        assert p.length == pytest.approx(100.0)

    def test_l_shape_arclength(self):
        p = build_path([(0.0, 0.0), (10.0, 0.0), (10.0, 10.0)], 2.0, 4.0, 2.0)
        assert p.length == pytest.approx(20.0)

    def test_single_waypoint_rejected(self):
        with pytest.raises(ValueError):
            build_path([(0.0, 0.0)], 2.0, 4.0, 2.0)

    def test_duplicate_consecutive_waypoints_rejected(self):
        with pytest.raises(DegenerateGeometryError):
            build_path([(0.0, 0.0), (0.0, 0.0), (10.0, 0.0)], 2.0, 4.0, 2.0)

    def test_narrow_corridor_rejected(self):
        with pytest.raises(ValueError):
            build_path([(0.0, 0.0), (10.0, 0.0)], 0.5, 4.0, 2.0)

    def test_cumulative_arclength_strictly_increasing(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            p = random_gentle_path(rng)
            assert np.all(np.diff(p.cumulative_arclength) > 0.0)


class TestEvalPath:
    def test_straight_has_zero_curvature(self):
        p = build_path([(0.0, 0.0), (100.0, 0.0)], 2.0, 4.0, 2.0)
        for s in (0.0, 13.7, 50.0, 100.0):
            _, _, kappa = eval_path(p, s)
            assert kappa == 0.0

    def test_start_position_and_heading(self):
        p = build_path([(0.0, 0.0), (100.0, 0.0)], 2.0, 4.0, 2.0)
        pos, psi, _ = eval_path(p, 0.0)
        assert pos == pytest.approx([0.0, 0.0])
        assert psi == pytest.approx(0.0)

    def test_circle_curvature(self, arc_path_r50):
        # analytic curvature of a radius-50 circle on its 100-vertex polyline
        _, _, kappa = eval_path(arc_path_r50, arc_path_r50.length / 2.0)
        assert kappa == pytest.approx(0.02, rel=0.10)

    def test_out_of_range_rejected(self, straight_path):
        with pytest.raises(ValueError):
            eval_path(straight_path, -0.1)
        with pytest.raises(ValueError):
            eval_path(straight_path, straight_path.length + 0.1)

    def test_arclength_consistency(self):
        # the polyline distance between two evaluated positions equals s2 - s1
        rng = np.random.default_rng(11)
        for _ in range(10):
            p = random_gentle_path(rng)
            s1, s2 = np.sort(rng.uniform(0.0, p.length, size=2))
            grid = np.concatenate([[s1],
                                   p.cumulative_arclength[
                                       (p.cumulative_arclength > s1)
                                       & (p.cumulative_arclength < s2)],
                                   [s2]])
            pos, _, _ = eval_path(p, grid)
            dist = float(np.sum(np.hypot(*np.diff(pos, axis=0).T)))
            assert dist == pytest.approx(s2 - s1, abs=1e-9)


class TestCollisionZone:
    def test_perpendicular_crossing(self, crossing_paths):
        # brute-force reference: overlap scan over (s_a, s_b) at 0.01 m
        a, b = crossing_paths
        zone = collision_zone(a, b)
        assert not zone.empty
        grid = np.arange(26.0, 34.0, 0.01)
        hits_a = []
        for sa in grid:
            if np.any(footprints_overlap(a, float(sa), b, grid)):
                hits_a.append(sa)
        lo, hi = min(hits_a), max(hits_a)
        assert zone.interval_a[0] == pytest.approx(lo, abs=0.02)
        assert zone.interval_a[1] == pytest.approx(hi, abs=0.02)
        # each interval: footprint length 4 and widths 2 give 27..33
        assert zone.interval_a[1] - zone.interval_a[0] == pytest.approx(6.0, abs=0.02)
        assert zone.interval_b[1] - zone.interval_b[0] == pytest.approx(6.0, abs=0.02)

    def test_separated_parallel_paths_empty(self):
        a = build_path([(-30.0, 0.0), (30.0, 0.0)], 2.0, 4.0, 2.0)
        c = build_path([(-30.0, 10.0), (30.0, 10.0)], 2.0, 4.0, 2.0)
        assert collision_zone(a, c).empty

    def test_identical_paths_full_span(self):
        a = build_path([(-30.0, 0.0), (30.0, 0.0)], 2.0, 4.0, 2.0)
        zone = collision_zone(a, a)
        assert zone.interval_a == (0.0, a.length)
        assert zone.interval_b == (0.0, a.length)

    def test_symmetry(self, crossing_paths):
        a, b = crossing_paths
        fwd = collision_zone(a, b)
        rev = collision_zone(b, a)
        assert fwd.interval_a == rev.interval_b
        assert fwd.interval_b == rev.interval_a

    def test_soundness_on_random_pairs(self):
        # outside the reported intervals no footprint overlap may exist
        rng = np.random.default_rng(7)
        checked = 0
        for _ in range(8):
            a = random_gentle_path(rng, n_segments=4, seg_len=10.0)
            b = random_gentle_path(rng, n_segments=4, seg_len=10.0)
            zone = collision_zone(a, b)
            ga = np.arange(0.0, a.length, 0.05)
            gb = np.arange(0.0, b.length, 0.05)
            if zone.empty:
                out_a, out_b = ga, gb
            else:
                out_a = ga[(ga < zone.interval_a[0]) | (ga > zone.interval_a[1])]
                out_b = gb[(gb < zone.interval_b[0]) | (gb > zone.interval_b[1])]
            # any position of one vehicle outside its interval is clear
            # against every position of the other
            for sa in out_a[:: max(1, len(out_a) // 60)]:
                assert not np.any(footprints_overlap(a, float(sa), b, gb))
                checked += 1
            for sb in out_b[:: max(1, len(out_b) // 60)]:
                assert not np.any(footprints_overlap(b, float(sb), a, ga))
                checked += 1
        assert checked > 100
