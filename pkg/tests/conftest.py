import numpy as np
import pytest

from coopplan import Limits, build_path


@pytest.fixture
def straight_path():
    return build_path([(0.0, 0.0), (200.0, 0.0)], 2.0, 4.0, 2.0)


@pytest.fixture
def crossing_paths():
    a = build_path([(-30.0, 0.0), (30.0, 0.0)], 2.0, 4.0, 2.0)
    b = build_path([(0.0, -30.0), (0.0, 30.0)], 2.0, 4.0, 2.0)
    return a, b


@pytest.fixture
def arc_path_r50():
    th = np.linspace(-np.pi / 3, np.pi / 3, 100)
    pts = np.stack([50.0 * np.cos(th), 50.0 * np.sin(th)], axis=1)
    return build_path(pts, 2.0, 4.0, 2.0)


@pytest.fixture
def default_limits():
    return Limits(v_max=20.0, a_min=-8.0, a_max=3.0, j_min=-10.0, j_max=10.0)


def random_gentle_path(rng, n_segments=6, seg_len=12.0):
    """Random smooth polyline: bounded heading increments per vertex."""
    heading = rng.uniform(0.0, 2.0 * np.pi)
    pos = rng.uniform(-10.0, 10.0, size=2)
    pts = [pos.copy()]
    for _ in range(n_segments):
        heading += rng.uniform(-0.35, 0.35)
        step = seg_len * rng.uniform(0.6, 1.4)
        pos = pos + step * np.array([np.cos(heading), np.sin(heading)])
        pts.append(pos.copy())
    return build_path(np.array(pts), 2.0, rng.uniform(3.5, 5.0),
                      rng.uniform(1.7, 2.2))
