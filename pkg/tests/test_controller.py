import math

import numpy as np
import pytest

from batteryevo.controller import angle_table, target_angle
from batteryevo.lsystem import JointParams


@pytest.mark.parametrize("T,P,t", [(1.0, 0.0, 0.0), (3.3, 0.7, 12.1), (10.0, 0.99, 5.0)])
def test_zero_amplitude(T, P, t):
    assert target_angle(JointParams(0.0, T, P), t) == 0.0


def test_quarter_period_peak():
    assert target_angle(JointParams(1.0, 2.0, 0.0), 0.5) == pytest.approx(math.pi / 2, abs=1e-15)


def test_phase_shift():
    assert target_angle(JointParams(0.5, 4.0, 0.25), 0.0) == pytest.approx(math.pi / 4, abs=1e-15)


def test_bounded_and_periodic():
    rng = np.random.default_rng(0)
    t = np.linspace(0, 60, 6001)
    for _ in range(200):
        p = JointParams.random(rng)
        theta = target_angle(p, t)
        assert np.all(np.abs(theta) <= p.amplitude * math.pi / 2 + 1e-15)
        assert np.allclose(theta, target_angle(p, t + p.period), atol=1e-9, rtol=0)


def test_table_matches_scalar():
    params = [JointParams(0.3, 2.5, 0.1), JointParams(1.0, 7.0, 0.6)]
    times = np.arange(100) * 0.05
    table = angle_table(params, times)
    for j, p in enumerate(params):
        assert np.allclose(table[:, j], [target_angle(p, t) for t in times], atol=1e-15)
    assert angle_table([], times).shape == (100, 0)
