"""Summary statistics, Pareto flags and Welch's t-test for experiment tables."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from ..moea.pareto import nondominated_mask

METRICS = {"speed": "speed_cms", "battery": "battery_remaining", "balance": "balance"}


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float | None
    sd: float | None  # sample standard deviation

    @classmethod
    def of(cls, values) -> "SummaryStats":
        v = np.asarray(list(values), dtype=float)
        if v.size == 0:
            return cls(0, None, None)
        sd = float(np.std(v, ddof=1)) if v.size > 1 else None
        return cls(int(v.size), float(np.mean(v)), sd)


def aggregate_generation(values) -> tuple[float, float, float]:
    """(median, first quartile, third quartile) with linear interpolation."""
    v = np.asarray(list(values), dtype=float)
    if v.size == 0:
        raise ValueError("cannot aggregate an empty generation")
    q1, med, q3 = np.percentile(v, [25, 50, 75], method="linear")
    return float(med), float(q1), float(q3)


def generation_summaries(rows, metrics=METRICS) -> list[dict]:
    """Median and quartiles per (experiment, generation, metric), pooled over runs."""
    groups = defaultdict(list)
    for r in rows:
        groups[(r["experiment"], int(r["generation"]))].append(r)
    out = []
    for (exp, gen) in sorted(groups):
        for name, column in metrics.items():
            med, q1, q3 = aggregate_generation(float(r[column]) for r in groups[(exp, gen)])
            out.append({"experiment": exp, "generation": gen, "metric": name,
                        "median": med, "q1": q1, "q3": q3})
    return out


def final_generation(rows) -> list[dict]:
    last = {}
    for r in rows:
        last[r["experiment"]] = max(last.get(r["experiment"], 0), int(r["generation"]))
    return [r for r in rows if int(r["generation"]) == last[r["experiment"]]]


def extract_pareto(rows, objectives=("speed_cms", "battery_remaining")) -> list[dict]:
    """Copy of ``rows`` with a ``nondominated`` 0/1 flag over the pooled set."""
    rows = list(rows)
    try:
        points = [[float(r[c]) for c in objectives] for r in rows]
    except KeyError as exc:
        raise ValueError(f"rows lack objective column {exc}") from None
    flags = nondominated_mask(points)
    return [{**r, "nondominated": int(f)} for r, f in zip(rows, flags)]


# --- Student t via the regularized incomplete beta ------------------------


def _beta_cf(a: float, b: float, x: float) -> float:
    # modified Lentz evaluation of the incomplete beta continued fraction
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c, d = 1.0, 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > tiny else tiny)
    h = d
    for m in range(1, 10_000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x in (0.0, 1.0):
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_cf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_cf(b, a, 1.0 - x) / b


def t_two_sided_p(t: float, df: float) -> float:
    if math.isinf(t):
        return 0.0
    return betainc(df / 2.0, 0.5, df / (df + t * t))


def welch_t(a: SummaryStats, b: SummaryStats) -> tuple[float, float, float]:
    """Welch's unequal-variance t-test from summary statistics: (t, df, p)."""
    if a.n < 2 or b.n < 2:
        raise ValueError("each group needs at least two observations")
    if a.sd is None or b.sd is None or a.sd < 0 or b.sd < 0:
        raise ValueError("standard deviations must be non-negative")
    if a.sd == 0 and b.sd == 0:
        raise ValueError("both standard deviations are zero")
    va, vb = a.sd**2 / a.n, b.sd**2 / b.n
    se2 = va + vb
    t = (a.mean - b.mean) / math.sqrt(se2)
    df = se2**2 / (va**2 / (a.n - 1) + vb**2 / (b.n - 1))
    return t, df, t_two_sided_p(t, df)


@dataclass(frozen=True)
class GroupComparison:
    label: str
    column: str
    groups: dict  # experiment -> SummaryStats
    t: float | None = None
    df: float | None = None
    p: float | None = None


def _compare(label, column, groups) -> GroupComparison:
    stats = list(groups.values())
    if len(stats) == 2 and all(s.n >= 2 and s.sd is not None for s in stats) and (stats[0].sd or stats[1].sd):
        t, df, p = welch_t(*stats)
        return GroupComparison(label, column, groups, t, df, p)
    return GroupComparison(label, column, groups)


def size_speed_table(rows, speed_threshold: float = 7.0, joints_threshold: int = 9):
    """Two grouped comparisons between experiments.

    The first summarizes joint counts of robots faster than
    ``speed_threshold``; the second summarizes speeds of robots with at
    least ``joints_threshold`` joints.  Empty groups come back with n = 0.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to summarize")
    experiments = sorted({r["experiment"] for r in rows}, reverse=True)
    fast = {e: SummaryStats.of(int(r["n_joints"]) for r in rows
                               if r["experiment"] == e and float(r["speed_cms"]) > speed_threshold)
            for e in experiments}
    big = {e: SummaryStats.of(float(r["speed_cms"]) for r in rows
                              if r["experiment"] == e and int(r["n_joints"]) >= joints_threshold)
           for e in experiments}
    return (
        _compare(f"n_joints | speed > {speed_threshold:g}", "n_joints", fast),
        _compare(f"speed | n_joints >= {joints_threshold}", "speed_cms", big),
    )
