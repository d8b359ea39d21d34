"""Initial battery charge from the consumption of maximum-size robots."""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from ..body import decode
from ..lsystem import RewriteConfig, random_genotype, rewrite
from ..sim import SimConfig, simulate

# charge = PRESSURE * mean consumption of a maximum-size robot
PRESSURE = 10.0 / 12.0


class CalibrationError(RuntimeError):
    pass


def max_size_bodies(samples, seed, rewrite_cfg, max_joints, max_bricks, tries=100_000):
    """``samples`` random bodies that reach the joint limit."""
    rng = np.random.default_rng(seed)
    bodies = []
    for _ in range(tries):
        body = decode(rewrite(random_genotype(rng), rewrite_cfg), max_joints, max_bricks)
        if body.n_joints == max_joints:
            bodies.append(body)
            if len(bodies) == samples:
                return bodies
    raise CalibrationError(
        f"found only {len(bodies)} of {samples} robots with {max_joints} joints in {tries} tries"
    )


def calibrate_cstart(
    sim_cfg: SimConfig = SimConfig(),
    samples: int = 20,
    seed: int = 0,
    rewrite_cfg: RewriteConfig = RewriteConfig(),
    max_joints: int = 10,
    max_bricks: int = 20,
    simulator=simulate,
    tries: int = 100_000,
) -> float:
    """Charge that gives maximum-size robots ~10/12 of the energy they would use.

    ``simulator(body, cfg)`` must return an object with ``energy_used``; it
    runs with an unlimited battery.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    unlimited = replace(sim_cfg, c_start=math.inf)
    bodies = max_size_bodies(samples, seed, rewrite_cfg, max_joints, max_bricks, tries)
    used = [simulator(b, unlimited).energy_used for b in bodies]
    mean = float(np.mean(used))
    if not mean > 0 or not math.isfinite(mean):
        raise CalibrationError(f"mean consumption {mean} gives no usable charge")
    return PRESSURE * mean
