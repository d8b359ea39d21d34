"""Exit criteria.  Each test prints one PASS/FAIL line and then asserts.

Criterion 4 and 6 share two desk-scale runs (mu = lambda = 24, 40
generations, 5 repetitions per mode) that take well under a minute each.
"""

import math
import time

import numpy as np
import pytest

from batteryevo.body import decode
from batteryevo.cli import main
from batteryevo.harness.calibrate import calibrate_cstart
from batteryevo.harness.records import read_rows
from batteryevo.harness.stats import SummaryStats, extract_pareto, final_generation, welch_t
from batteryevo.lsystem import crossover, is_valid, mutate, random_genotype, rewrite
from batteryevo.moea.engine import EvolutionConfig, Problem, evolve
from batteryevo.moea.pareto import crowding_distance, fast_nondominated_sort, hypervolume_2d, nondominated_mask
from batteryevo.sim import SimConfig, battery_levels, compute_power, drain, simulate
from oracles import peel_fronts

N_PROPERTY = 10_000
DESK = """\
mu = 24
lambda = 24
generations = 40
repetitions = 5
seed = 2026
c_start = auto
calibration_samples = 20
workers = {workers}
output_dir = {out}
"""


@pytest.fixture
def verdict(request):
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def report(number, ok, detail=""):
        line = f"[acceptance {number}] {'PASS' if ok else 'FAIL'} {detail}"
        if reporter is not None:
            reporter.write_line(line)
        else:
            print(line)
        return ok

    return report


def test_1_battery_arithmetic(verdict):
    checks = [
        abs(compute_power([(2, 0.5), (1, -1), (-3, 0.2)]) - 1.0) <= 1e-12,
        compute_power([(3.0, 0.0), (-1.0, 0.0)]) == 0.0,
        abs(compute_power([(4, 0.25)]) - 1.0) <= 1e-12,
        abs(compute_power([(0.01 * 2 + 0.05 * 1, 1.0)]) * 0.05 - 0.07 * 0.05) <= 1e-12,
    ]
    deltas = [0.5, 1.25, 0.0, 2.0]
    levels = battery_levels(deltas, 10.0)
    checks.append(np.allclose(levels, [9.5, 8.25, 8.25, 6.25], atol=1e-12, rtol=0))
    checks.append(drain([0.5] * 1200, 10.0) == (0.0, 20))
    ok = all(checks)
    verdict(1, ok, f"power/accumulation checks {sum(checks)}/{len(checks)}, constant drain stops at step 20")
    assert ok


def test_2_nondominated_sort_oracle(verdict):
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(200):
        n = int(rng.integers(2, 65))
        pts = rng.integers(0, 8, size=(n, 2)).astype(float)
        # force some exact duplicates
        k = int(rng.integers(0, n // 2 + 1))
        pts[rng.integers(0, n, size=k)] = pts[rng.integers(0, n, size=k)]
        pts = [tuple(p) for p in pts]
        mismatches += fast_nondominated_sort(pts) != peel_fronts(pts)
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 5.0
    verdict(2, ok, f"{200 - mismatches}/200 populations equal, {elapsed:.2f}s")
    assert ok


def _vector_problem():
    def evaluate(x):
        v = float(x[0])
        return (v, 1.0 - v * v), None, None

    def blend(a, b, rng):
        w = rng.random(a.shape)
        return np.clip(w * a + (1 - w) * b, 0.0, 1.0)

    def jitter(x, rng):
        return np.clip(x + rng.normal(0.0, 0.05, size=x.shape), 0.0, 1.0)

    return Problem(random=lambda rng: rng.random(1), crossover=blend, mutate=jitter, evaluate=evaluate)


def test_3_nsga2_hypervolume(verdict):
    start = time.perf_counter()
    pop = evolve(_vector_problem(), EvolutionConfig(mu=40, lam=40, generations=50, seed=3))
    elapsed = time.perf_counter() - start
    pts = np.array([ind.objectives for ind in pop])
    front = pts[nondominated_mask(pts)]
    xs = np.linspace(0.0, 1.0, 200_001)
    true_hv = hypervolume_2d(np.c_[xs, 1 - xs**2])
    ratio = hypervolume_2d(front) / true_hv
    ok = ratio >= 0.95 and elapsed < 10.0 and abs(true_hv - 2 / 3) < 1e-4
    verdict(3, ok, f"hypervolume ratio {ratio:.4f} (true front {true_hv:.5f}), {elapsed:.2f}s")
    assert ok


@pytest.fixture(scope="module")
def desk_runs(tmp_path_factory):
    out = {}
    for workers in (1, 2):
        d = tmp_path_factory.mktemp(f"desk{workers}")
        cfg = d / "desk.cfg"
        cfg.write_text(DESK.format(workers=workers, out=d))
        start = time.perf_counter()
        assert main(["run", "--config", str(cfg)]) == 0
        out[workers] = (d, time.perf_counter() - start)
    return out


def _c_start(directory):
    for line in (directory / "run_config.txt").read_text().splitlines():
        key, _, value = line.partition("=")
        if key.strip() == "c_start":
            return float(value)
    raise AssertionError("c_start missing from run_config.txt")


def test_4_trend_reproduction(desk_runs, verdict):
    directory, elapsed = desk_runs[1]
    rows = final_generation(read_rows(directory / "robots.csv"))
    c_start = _c_start(directory)
    by = {e: [r for r in rows if r["experiment"] == e] for e in ("baseline", "battery")}

    def med(exp, col):
        return float(np.median([r[col] for r in by[exp]]))

    def mean(exp, col):
        return float(np.mean([r[col] for r in by[exp]]))

    front = [r for r in extract_pareto(by["battery"]) if r["nondominated"]]
    parts = {
        "a": med("baseline", "speed_cms") > med("battery", "speed_cms"),
        "b": med("battery", "battery_remaining") > med("baseline", "battery_remaining"),
        "c": any(r["speed_cms"] == 0.0 and r["battery_remaining"] == c_start for r in front),
        "d": mean("battery", "n_joints") <= mean("baseline", "n_joints"),
    }
    ok = all(parts.values()) and elapsed < 600
    detail = (
        f"c_start={c_start:.4g}; "
        f"(a) median speed {med('baseline', 'speed_cms'):.3g} vs {med('battery', 'speed_cms'):.3g}; "
        f"(b) median battery {med('battery', 'battery_remaining'):.3g} vs {med('baseline', 'battery_remaining'):.3g}; "
        f"(c) idle robot on front: {parts['c']}; "
        f"(d) mean joints {mean('battery', 'n_joints'):.2f} vs {mean('baseline', 'n_joints'):.2f}; "
        f"{elapsed:.0f}s"
    )
    verdict(4, ok, detail)
    assert ok, parts


def test_5_welch_on_paper_tables(verdict):
    t2, df2, p2 = welch_t(SummaryStats(71, 5.35, 1.29), SummaryStats(940, 4.33, 2.0))
    t1, df1, p1 = welch_t(SummaryStats(9, 7.44, 2.35), SummaryStats(91, 8.88, 0.32))
    direct2 = (5.35 - 4.33) / math.sqrt(1.29**2 / 71 + 2.0**2 / 940)
    direct1 = (7.44 - 8.88) / math.sqrt(2.35**2 / 9 + 0.32**2 / 91)
    ok = (p2 < 0.001 and p1 > 0.05
          and abs(t2 - direct2) <= 0.05 and abs(t2 - 6.13) <= 0.05
          and abs(t1 - direct1) <= 0.05 and abs(abs(t1) - 1.84) <= 0.05)
    verdict(5, ok, f"table 2: t={t2:.3f} p={p2:.2e}; table 1: t={t1:.3f} df={df1:.2f} p={p1:.3f}")
    assert ok


def test_6_determinism(desk_runs, verdict):
    a = (desk_runs[1][0] / "robots.csv").read_bytes()
    b = (desk_runs[2][0] / "robots.csv").read_bytes()
    ok = a == b and len(a) > 0
    verdict(6, ok, f"robots.csv identical with 1 and 2 workers ({len(a)} bytes)")
    assert ok


def test_7_invariant_suites(verdict):
    rng = np.random.default_rng(7)
    failures = {}

    def fail(name):
        failures[name] = failures.get(name, 0) + 1

    # genotype closure under variation
    genotypes = [random_genotype(rng) for _ in range(N_PROPERTY)]
    for i, g in enumerate(genotypes):
        if not is_valid(mutate(g, rng)):
            fail("mutate")
        if not is_valid(crossover(g, genotypes[i - 1], rng)):
            fail("crossover")

    # decoding and simulation
    cfg_joints = rng.integers(0, 11, size=N_PROPERTY)
    cfg_bricks = rng.integers(0, 21, size=N_PROPERTY)
    charges = rng.uniform(0.05, 40.0, size=N_PROPERTY)
    for g, mj, mb, c in zip(genotypes, cfg_joints, cfg_bricks, charges):
        body = decode(rewrite(g), int(mj), int(mb))
        pos = [m.pos for m in body.modules]
        if len(set(pos)) != len(pos):
            fail("overlap")
        if body.n_joints > mj or body.n_bricks > mb:
            fail("limits")
        cfg = SimConfig(duration=3.0, c_start=float(c))
        res = simulate(body, cfg)
        if res.speed < 0:
            fail("speed")
        if not 0 <= res.balance <= 1:
            fail("balance")
        if not 0 <= res.battery_remaining <= c:
            fail("battery range")
        if res.battery_remaining > 0 and not math.isclose(
                c - res.battery_remaining, res.energy_used, rel_tol=1e-9, abs_tol=1e-12):
            fail("bookkeeping")

    # battery monotonicity on random consumption streams
    for _ in range(N_PROPERTY):
        deltas = rng.exponential(0.2, size=50)
        levels = battery_levels(deltas, float(rng.uniform(0.1, 12)))
        if np.any(np.diff(levels) > 0) or np.any(levels < 0):
            fail("monotone")

    # crowding boundaries
    for _ in range(N_PROPERTY):
        pts = rng.random((int(rng.integers(2, 20)), 2))
        d = crowding_distance(pts)
        if any(x < 0 for x in d) or any(
                d[int(np.argmin(pts[:, k]))] != math.inf or d[int(np.argmax(pts[:, k]))] != math.inf
                for k in range(2)):
            fail("crowding")

    ok = not failures
    verdict(7, ok, f"{N_PROPERTY} samples per suite; failures: {failures or 'none'}")
    assert ok


def test_8_calibration(verdict):
    class Stub:
        energy_used = 12.0

    value = calibrate_cstart(samples=5, simulator=lambda body, cfg: Stub)
    ok = abs(value - 10.0) <= 1e-9
    verdict(8, ok, f"stubbed consumption 12.0 -> c_start {value!r}")
    assert ok
