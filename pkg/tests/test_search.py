import numpy as np
import pytest
from hypothesis import given, strategies as st

from jbtriple.search import hill_climb, max_scale


def euclid(x):
    return np.linalg.norm(x, axis=1)


@given(st.floats(0.1, 3.0))
def test_max_scale_on_euclidean_ball(r):
    t = max_scale(euclid, np.zeros(3), np.eye(3) * 0.5, r)
    want = min(2 * r, 4.0)
    assert np.all(t <= want) and np.allclose(t, want, rtol=3e-7)


def test_max_scale_one_sided_and_infeasible():
    base = np.array([0.5, 0.0])
    d = np.array([[1.0, 0.0]])
    assert max_scale(euclid, base, d, 1.0, symmetric=False)[0] == pytest.approx(0.5, rel=3e-7)
    assert max_scale(euclid, base, d, 1.0, symmetric=True)[0] == pytest.approx(0.5, rel=3e-7)
    assert max_scale(euclid, np.array([2.0, 0.0]), d, 1.0)[0] == 0.0


def test_hill_climb_finds_a_known_maximum():
    target = np.array([1.0, 2.0, -2.0]) / 3
    val, x = hill_climb(lambda y: y @ target, 3, np.random.default_rng(0), restarts=8, steps=60)
    assert val == pytest.approx(1, abs=1e-4)
    assert np.allclose(x, target, atol=2e-2)
    assert hill_climb(lambda y: y[:, 0], 0, np.random.default_rng(0)) == (0.0, pytest.approx(np.zeros(0)))
