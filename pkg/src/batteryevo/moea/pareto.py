"""Pareto dominance, non-dominated sorting and crowding (all objectives maximized)."""

from __future__ import annotations

import numpy as np


def dominates(a, b) -> bool:
    if len(a) != len(b):
        raise ValueError(f"objective vectors differ in length ({len(a)} vs {len(b)})")
    better = False
    for x, y in zip(a, b):
        if x < y:
            return False
        if x > y:
            better = True
    return better


def domination_matrix(points) -> np.ndarray:
    """``D[i, j]`` is true when point i dominates point j."""
    p = np.asarray(points, dtype=float)
    if p.ndim == 1:
        p = p[:, None]
    ge = np.all(p[:, None, :] >= p[None, :, :], axis=-1)
    gt = np.any(p[:, None, :] > p[None, :, :], axis=-1)
    return ge & gt


def fast_nondominated_sort(points) -> list[list[int]]:
    """Split point indices into successive non-dominated fronts.

    Deb's bookkeeping: each point counts how many others dominate it, and
    peeling a front decrements the counters of everything it dominates.
    Indices inside a front are in ascending order.
    """
    n = len(points)
    if n == 0:
        return []
    dom = domination_matrix(points)
    count = dom.sum(axis=0)
    fronts = []
    current = np.flatnonzero(count == 0)
    while current.size:
        fronts.append([int(i) for i in current])
        count = count - dom[current].sum(axis=0)
        count[current] = -1
        current = np.flatnonzero(count == 0)
    return fronts


def nondominated_mask(points) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    if len(p) == 0:
        return np.zeros(0, dtype=bool)
    return ~domination_matrix(p).any(axis=0)


def crowding_distance(front) -> list[float]:
    """Crowding distance of each point in ``front``.

    Boundary points of every objective get infinity.  An objective whose
    values are all equal adds nothing to interior points.
    """
    p = np.asarray(front, dtype=float)
    if p.ndim == 1:
        p = p[:, None]
    n, m = p.shape
    dist = np.zeros(n)
    if n == 0:
        return []
    for k in range(m):
        order = np.argsort(p[:, k], kind="stable")
        vals = p[order, k]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        span = vals[-1] - vals[0]
        if span == 0 or n < 3:
            continue
        dist[order[1:-1]] += (vals[2:] - vals[:-2]) / span
    return [float(d) for d in dist]


def hypervolume_2d(points, ref=(0.0, 0.0)) -> float:
    """Area dominated by ``points`` and bounded below by ``ref`` (maximization)."""
    p = np.asarray(points, dtype=float).reshape(-1, 2)
    p = p[(p[:, 0] > ref[0]) & (p[:, 1] > ref[1])]
    if len(p) == 0:
        return 0.0
    p = p[np.argsort(-p[:, 0], kind="stable")]
    area, best_y = 0.0, ref[1]
    for x, y in p:
        if y > best_y:
            area += (x - ref[0]) * (y - best_y)
            best_y = y
    return float(area)
