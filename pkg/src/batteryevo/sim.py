"""Deterministic planar locomotion surrogate with a battery.

Each joint tracks its oscillator set-point.  Joint speed and acceleration
come from finite differences, torque is ``I * alpha + beta * phi`` and
the battery pays for positive mechanical work only.  The same positive
work is turned into thrust perpendicular to the limb, which drives a
drag-limited rigid body in the plane.

Two routes compute the same trajectory: :func:`step` advances one time
step and is kept deliberately literal, :func:`simulate` evaluates the
whole run with array operations.  Because torques are rotation invariant
the yaw rate never depends on the heading, which is what lets the
vectorised route integrate heading with a cumulative sum.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .body import Body, decode
from .controller import angle_table, target_angle
from .lsystem import Genotype, RewriteConfig, rewrite


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.05
    duration: float = 60.0
    c_start: float = 10.0
    module_length: float = 0.1
    module_mass: float = 1.0
    beta: float = 0.05
    kappa: float = 1.0
    gamma_t: float = 1.0
    gamma_r: float = 1.0
    omega_ref: float = math.pi

    def __post_init__(self):
        for name in ("dt", "duration", "c_start", "module_length", "module_mass",
                     "beta", "kappa", "gamma_t", "gamma_r", "omega_ref"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        ratio = self.duration / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * ratio or round(ratio) < 1:
            raise ValueError("duration must be a positive whole multiple of dt")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


@dataclass(frozen=True)
class EvalResult:
    speed: float  # cm/s
    battery_remaining: float
    balance: float
    alive_steps: int
    displacement: float  # m
    energy_used: float


@dataclass(frozen=True)
class Kinematics:
    """Geometry and inertia of a body, fixed for the whole run."""

    params: list
    inertia: np.ndarray  # per joint
    offsets: np.ndarray  # joint position relative to core, meters, (J, 2)
    base_angle: np.ndarray  # heading of each joint's attach direction
    total_mass: float
    total_inertia: float

    @classmethod
    def of(cls, body: Body, cfg: SimConfig) -> "Kinematics":
        L, m = cfg.module_length, cfg.module_mass
        core = np.array(body.core.pos, dtype=float)
        joints = body.joints
        inertia = np.array(
            [sum(m * (d * L) ** 2 for _, d in body.subtree(j.id)) for j in joints],
            dtype=float,
        )
        offsets = np.array([(np.array(j.pos) - core) * L for j in joints], dtype=float)
        base = np.array([math.atan2(j.attach_dir[1], j.attach_dir[0]) for j in joints])
        rel = (np.array([mod.pos for mod in body.modules], dtype=float) - core) * L
        return cls(
            params=[j.params for j in joints],
            inertia=inertia,
            offsets=offsets.reshape(-1, 2),
            base_angle=base,
            total_mass=m * len(body.modules),
            total_inertia=float(m * np.sum(rel**2)),
        )


@dataclass
class StepState:
    theta: np.ndarray
    phi: np.ndarray
    position: np.ndarray = field(default_factory=lambda: np.zeros(2))
    heading: float = 0.0
    omega: float = 0.0
    steps: int = 1


def compute_power(joints) -> float:
    """Positive mechanical power summed over ``(torque, angular speed)`` pairs."""
    return float(sum(max(0.0, M * phi) for M, phi in joints))


def joint_torque(inertia, alpha, phi, beta):
    """Signed torque: inertial load plus viscous damping."""
    return inertia * alpha + beta * phi


def speed_of(start, end, duration: float) -> float:
    """Straight-line speed in cm/s between two positions given in meters."""
    if not duration > 0:
        raise ValueError("duration must be positive")
    d = np.asarray(end, dtype=float) - np.asarray(start, dtype=float)
    return float(np.hypot(d[0], d[1]) / duration * 100)


def balance_of(omegas, omega_ref: float) -> float:
    omegas = np.asarray(omegas, dtype=float)
    if omegas.size == 0:
        raise ValueError("balance needs at least one yaw-rate sample")
    return 1.0 - min(1.0, float(np.mean(np.abs(omegas))) / omega_ref)


def drain(deltas, c_start: float) -> tuple[float, int]:
    """Run a consumption stream against a battery.

    Returns (remaining charge, steps completed).  The step that empties the
    battery counts as completed; the charge is clamped at zero.
    """
    spent = np.cumsum(np.asarray(deltas, dtype=float))
    empty = np.flatnonzero(spent >= c_start)
    if empty.size:
        return 0.0, int(empty[0]) + 1
    if spent.size == 0:
        return float(c_start), 0
    return float(c_start - spent[-1]), int(spent.size)


def battery_levels(deltas, c_start: float) -> np.ndarray:
    """Charge left after each step of the run, clamped at zero."""
    remaining, alive = drain(deltas, c_start)
    levels = c_start - np.cumsum(np.asarray(deltas, dtype=float)[:alive])
    levels = np.maximum(levels, 0.0)
    if alive:
        levels[-1] = remaining
    return levels


def _rot(v: np.ndarray, angle) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.stack([c * v[..., 0] - s * v[..., 1], s * v[..., 0] + c * v[..., 1]], axis=-1)


def _check(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise SimulationError("non-finite value in simulation; check the constants")


def step(kin: Kinematics, prev: StepState | None, t: float, cfg: SimConfig):
    """Advance one time step; returns (new state, energy consumed in the step)."""
    dt = cfg.dt
    theta = np.array([target_angle(p, t) for p in kin.params], dtype=float)
    if prev is None:
        prev = StepState(theta=theta, phi=np.zeros_like(theta), steps=0)
        phi = np.zeros_like(theta)
        alpha = np.zeros_like(theta)
    else:
        phi = (theta - prev.theta) / dt
        # the first velocity sample has no genuine predecessor
        alpha = (phi - prev.phi) / dt if prev.steps > 1 else np.zeros_like(theta)
    torque = joint_torque(kin.inertia, alpha, phi, cfg.beta)
    delta_c = compute_power(zip(torque, phi)) * dt

    mag = cfg.kappa * np.maximum(0.0, torque * phi)
    sign = np.where(phi < 0, -1.0, 1.0)
    ang = kin.base_angle + theta + prev.heading + np.pi / 2
    thrust = (sign * mag)[:, None] * np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    arms = _rot(kin.offsets, prev.heading)
    force = thrust.sum(axis=0) if len(thrust) else np.zeros(2)
    tau = float(np.sum(arms[:, 0] * thrust[:, 1] - arms[:, 1] * thrust[:, 0]))
    v = force / (cfg.gamma_t * kin.total_mass)
    omega = tau / (cfg.gamma_r * kin.total_inertia) if kin.total_inertia > 0 else 0.0
    _check(torque, v, np.array([omega, delta_c]))
    state = StepState(
        theta=theta,
        phi=phi,
        position=prev.position + v * dt,
        heading=prev.heading + omega * dt,
        omega=omega,
        steps=prev.steps + 1,
    )
    return state, delta_c


def _trajectory(kin: Kinematics, cfg: SimConfig):
    n, dt = cfg.n_steps, cfg.dt
    times = np.arange(n) * dt
    theta = angle_table(kin.params, times)
    phi = np.zeros_like(theta)
    phi[1:] = (theta[1:] - theta[:-1]) / dt
    alpha = np.zeros_like(theta)
    alpha[2:] = (phi[2:] - phi[1:-1]) / dt
    torque = joint_torque(kin.inertia, alpha, phi, cfg.beta)
    work = np.maximum(0.0, torque * phi)
    delta_c = work.sum(axis=1) * dt

    ang = kin.base_angle + theta + np.pi / 2
    signed = np.where(phi < 0, -1.0, 1.0) * cfg.kappa * work
    fx = signed * np.cos(ang)
    fy = signed * np.sin(ang)
    ox, oy = kin.offsets[:, 0], kin.offsets[:, 1]
    tau = (ox * fy - oy * fx).sum(axis=1)
    force = np.stack([fx.sum(axis=1), fy.sum(axis=1)], axis=-1)
    if kin.total_inertia > 0:
        omega = tau / (cfg.gamma_r * kin.total_inertia)
    else:
        omega = np.zeros(n)
    heading = np.concatenate([[0.0], np.cumsum(omega * dt)[:-1]])
    v = _rot(force, heading) / (cfg.gamma_t * kin.total_mass)
    position = np.cumsum(v * dt, axis=0)
    _check(torque, delta_c, omega, position)
    return times, delta_c, omega, heading + omega * dt, position


def simulate(body: Body, cfg: SimConfig = SimConfig(), trace: str | None = None) -> EvalResult:
    """Run ``body`` until the nominal duration ends or the battery is empty."""
    kin = Kinematics.of(body, cfg)
    with np.errstate(over="ignore", invalid="ignore"):  # non-finite values raise below
        times, delta_c, omega, heading, position = _trajectory(kin, cfg)
    remaining, alive = drain(delta_c, cfg.c_start)
    end = position[alive - 1]
    if trace is not None:
        _write_trace(trace, cfg.c_start, times[:alive], delta_c[:alive],
                     position[:alive], heading[:alive])
    return EvalResult(
        speed=speed_of((0.0, 0.0), end, cfg.duration),
        battery_remaining=remaining,
        balance=balance_of(omega[:alive], cfg.omega_ref),
        alive_steps=alive,
        displacement=float(np.hypot(end[0], end[1])),
        energy_used=float(np.sum(delta_c[:alive])),
    )


def _write_trace(path, c_start, times, delta_c, position, heading):
    level = battery_levels(delta_c, c_start)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "t", "E", "x", "y", "psi", "dC"])
        for i in range(len(times)):
            w.writerow([i, repr(float(times[i])), repr(float(level[i])),
                        repr(float(position[i, 0])), repr(float(position[i, 1])),
                        repr(float(heading[i])), repr(float(delta_c[i]))])


def simulate_genotype(
    g: Genotype,
    cfg: SimConfig = SimConfig(),
    rewrite_cfg: RewriteConfig = RewriteConfig(),
    max_joints: int = 10,
    max_bricks: int = 20,
) -> tuple[Body, EvalResult]:
    body = decode(rewrite(g, rewrite_cfg), max_joints, max_bricks)
    return body, simulate(body, cfg)
