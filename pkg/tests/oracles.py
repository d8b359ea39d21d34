"""Slow, obviously-correct reference implementations used only by tests."""

import numpy as np


def dominates_ref(a, b):
    return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))


def peel_fronts(points):
    """Repeatedly remove the set that nothing remaining dominates."""
    remaining = list(range(len(points)))
    fronts = []
    while remaining:
        front = [i for i in remaining
                 if not any(dominates_ref(points[j], points[i]) for j in remaining if j != i)]
        fronts.append(front)
        remaining = [i for i in remaining if i not in front]
    return fronts


def nondominated_ref(points):
    return [not any(dominates_ref(q, p) for q in points) for p in points]


def grid_hypervolume(points, ref=(0.0, 0.0), resolution=2000, upper=(1.0, 1.0)):
    """Dominated area by counting cell centres on a regular grid."""
    xs = ref[0] + (np.arange(resolution) + 0.5) * (upper[0] - ref[0]) / resolution
    ys = ref[1] + (np.arange(resolution) + 0.5) * (upper[1] - ref[1]) / resolution
    X, Y = np.meshgrid(xs, ys)
    covered = np.zeros_like(X, dtype=bool)
    for px, py in points:
        covered |= (X <= px) & (Y <= py)
    cell = (upper[0] - ref[0]) * (upper[1] - ref[1]) / resolution**2
    return covered.sum() * cell


def random_population(rng, n, m=2, duplicates=True):
    pts = rng.integers(0, 6, size=(n, m)).astype(float) if duplicates else rng.random((n, m))
    return [tuple(p) for p in pts]
