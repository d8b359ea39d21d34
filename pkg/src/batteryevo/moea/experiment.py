"""Robot evolution experiments: the glue between genotypes, simulator and loop."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .. import lsystem
from ..body import descriptors
from ..lsystem import RewriteConfig
from ..sim import SimConfig, simulate_genotype
from .engine import EvolutionConfig, Individual, Problem, evolve

ROBOT_COLUMNS = (
    "experiment", "run", "generation", "robot_id", "n_modules", "n_bricks",
    "n_joints", "branching", "proportion", "speed_cms", "battery_remaining",
    "balance", "alive_steps", "genotype",
)


@dataclass(frozen=True)
class RobotEvaluator:
    sim: SimConfig = SimConfig()
    rewrite: RewriteConfig = RewriteConfig()
    max_joints: int = 10
    max_bricks: int = 20
    mode: str = "battery"

    def __call__(self, genotype):
        body, res = simulate_genotype(genotype, self.sim, self.rewrite, self.max_joints, self.max_bricks)
        if self.mode == "baseline":
            objs = (res.speed,)
        else:
            objs = (res.speed, res.battery_remaining)
        return objs, body, res


def robot_problem(evaluator: RobotEvaluator) -> Problem:
    return Problem(
        random=lsystem.random_genotype,
        crossover=lsystem.crossover,
        mutate=lsystem.mutate,
        evaluate=evaluator,
    )


def robot_row(experiment: str, run: int, generation: int, ind: Individual) -> dict:
    d = descriptors(ind.body)
    r = ind.result
    return {
        "experiment": experiment,
        "run": run,
        "generation": generation,
        "robot_id": ind.id,
        "n_modules": d.size,
        "n_bricks": d.n_bricks,
        "n_joints": d.n_joints,
        "branching": d.branching,
        "proportion": d.proportion,
        "speed_cms": r.speed,
        "battery_remaining": r.battery_remaining,
        "balance": r.balance,
        "alive_steps": r.alive_steps,
        "genotype": lsystem.genotype_to_line(ind.genotype),
    }


@dataclass
class ExperimentLog:
    rows: list[dict] = field(default_factory=list)
    final: list[list[Individual]] = field(default_factory=list)  # per repetition


def run_seed(master_seed: int, repetition: int) -> int:
    return int(np.random.SeedSequence(master_seed, spawn_key=(repetition,)).generate_state(1)[0])


def run_experiment(
    cfg: EvolutionConfig,
    sim_cfg: SimConfig = SimConfig(),
    repetitions: int = 10,
    rewrite_cfg: RewriteConfig = RewriteConfig(),
    max_joints: int = 10,
    max_bricks: int = 20,
    workers: int = 1,
) -> ExperimentLog:
    """Evolve ``repetitions`` independent runs and log every generation's survivors."""
    evaluator = RobotEvaluator(sim_cfg, rewrite_cfg, max_joints, max_bricks, cfg.mode)
    problem = robot_problem(evaluator)
    log = ExperimentLog()
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    mapper = (lambda f, xs: pool.map(f, xs, chunksize=8)) if pool else map
    try:
        for rep in range(repetitions):
            run_cfg = replace(cfg, seed=run_seed(cfg.seed, rep))

            def record(gen, pop, rep=rep):
                log.rows.extend(robot_row(cfg.mode, rep, gen, ind) for ind in pop)

            log.final.append(evolve(problem, run_cfg, rep, mapper, record))
    finally:
        if pool:
            pool.shutdown()
    return log

