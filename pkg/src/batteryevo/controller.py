"""Open-loop sinusoidal joint controller."""

import numpy as np

from .lsystem import JointParams

MAX_ANGLE = np.pi / 2


def target_angle(p: JointParams, t):
    """Joint set-point in radians at time ``t`` (scalar or array, seconds)."""
    return p.amplitude * MAX_ANGLE * np.sin(2 * np.pi * t / p.period + 2 * np.pi * p.phase)


def angle_table(params: list[JointParams], times: np.ndarray) -> np.ndarray:
    """Angles for every joint at every time, shape (len(times), len(params))."""
    if not params:
        return np.zeros((len(times), 0))
    amp = np.array([p.amplitude for p in params])
    period = np.array([p.period for p in params])
    phase = np.array([p.phase for p in params])
    arg = 2 * np.pi * times[:, None] / period + 2 * np.pi * phase
    return amp * MAX_ANGLE * np.sin(arg)
