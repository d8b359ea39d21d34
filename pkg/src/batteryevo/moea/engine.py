"""(mu + lambda) evolutionary loop with NSGA-II or tournament survivor selection.

The loop is problem agnostic: a :class:`Problem` supplies genotype
construction, variation and evaluation.  Every random decision draws from
a stream seeded by ``(master seed, repetition, generation, slot)``, so
results do not depend on how evaluations are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .pareto import crowding_distance, fast_nondominated_sort

MODES = ("baseline", "battery")
SURVIVOR_MODES = ("nsga2_truncation", "tournament")

# stream tags for seed derivation
_INIT, _OFFSPRING, _SURVIVORS = 0, 1, 2


@dataclass
class Individual:
    genotype: Any
    objectives: tuple[float, ...]
    id: int = 0
    body: Any = None
    result: Any = None
    rank: int = -1
    crowding: float = 0.0


@dataclass(frozen=True)
class EvolutionConfig:
    mu: int = 100
    lam: int = 100
    generations: int = 100
    tournament_k: int = 4
    p_crossover: float = 0.8
    p_mutation: float = 0.8
    mode: str = "battery"
    survivor_selection: str = "nsga2_truncation"
    seed: int = 0

    def __post_init__(self):
        if self.mu < 1 or self.lam < 1:
            raise ValueError("mu and lambda must be >= 1")
        if self.generations < 0:
            raise ValueError("generations must be >= 0")
        if self.tournament_k < 1:
            raise ValueError("tournament_k must be >= 1")
        for name in ("p_crossover", "p_mutation"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.survivor_selection not in SURVIVOR_MODES:
            raise ValueError(f"survivor_selection must be one of {SURVIVOR_MODES}")


@dataclass
class Problem:
    """Callbacks the loop needs.  ``evaluate`` must be picklable for process pools.

    ``evaluate(genotype)`` returns ``(objectives, body, result)``.
    """

    random: Callable[[np.random.Generator], Any]
    crossover: Callable[[Any, Any, np.random.Generator], Any]
    mutate: Callable[[Any, np.random.Generator], Any]
    evaluate: Callable[[Any], tuple]


def stream(seed: int, repetition: int, generation: int, tag: int, slot: int = 0):
    ss = np.random.SeedSequence(seed, spawn_key=(repetition, generation, tag, slot))
    return np.random.default_rng(ss)


def rank_population(pop: list[Individual]) -> list[list[int]]:
    """Set rank and crowding on every individual; returns the fronts."""
    fronts = fast_nondominated_sort([ind.objectives for ind in pop])
    for r, front in enumerate(fronts):
        dists = crowding_distance([pop[i].objectives for i in front])
        for i, d in zip(front, dists):
            pop[i].rank = r
            pop[i].crowding = d
    return fronts


def speed_key(ind: Individual):
    return (-ind.objectives[0],)


def crowded_key(ind: Individual):
    return (ind.rank, -ind.crowding)


def key_for(mode: str):
    return speed_key if mode == "baseline" else crowded_key


def tournament_winner(pop: list[Individual], indices, key) -> int:
    """Best of the sampled indices; ties go to the lowest index."""
    return min(indices, key=lambda i: (key(pop[i]), i))


def tournament_select(pop: list[Individual], k: int, key, rng: np.random.Generator) -> int:
    """Index of the winner of a size-``k`` tournament drawn with replacement."""
    idx = [int(i) for i in rng.integers(0, len(pop), size=k)]
    return tournament_winner(pop, idx, key)


def truncation_survivors(pool: list[Individual], mu: int) -> list[int]:
    """Fill with whole fronts; split the last one by descending crowding."""
    chosen = []
    for front in rank_population(pool):
        if len(chosen) + len(front) <= mu:
            chosen.extend(front)
            if len(chosen) == mu:
                break
            continue
        by_crowding = sorted(front, key=lambda i: (-pool[i].crowding, i))
        chosen.extend(by_crowding[: mu - len(chosen)])
        break
    return chosen


def tournament_survivors(pool: list[Individual], mu: int, k: int, key, rng) -> list[int]:
    """Repeated tournaments; each winner leaves the pool before the next one."""
    rank_population(pool)
    left = list(range(len(pool)))
    chosen = []
    while len(chosen) < mu:
        draw = [left[int(j)] for j in rng.integers(0, len(left), size=k)]
        w = tournament_winner(pool, draw, key)
        chosen.append(w)
        left.remove(w)
    return chosen


def evaluate_all(problem: Problem, genotypes: list, mapper=map) -> list[tuple]:
    return list(mapper(problem.evaluate, genotypes))


def initial_population(problem, cfg, repetition, mapper=map) -> list[Individual]:
    genotypes = [problem.random(stream(cfg.seed, repetition, 0, _INIT, i)) for i in range(cfg.mu)]
    pop = [
        Individual(g, tuple(objs), id=i, body=body, result=res)
        for i, (g, (objs, body, res)) in enumerate(zip(genotypes, evaluate_all(problem, genotypes, mapper)))
    ]
    rank_population(pop)
    return pop


def make_offspring(pop, cfg, problem, repetition, generation) -> list:
    key = key_for(cfg.mode)
    children = []
    for i in range(cfg.lam):
        rng = stream(cfg.seed, repetition, generation, _OFFSPRING, i)
        a = pop[tournament_select(pop, cfg.tournament_k, key, rng)]
        b = pop[tournament_select(pop, cfg.tournament_k, key, rng)]
        if rng.random() < cfg.p_crossover:
            child = problem.crossover(a.genotype, b.genotype, rng)
        else:
            child = a.genotype
        if rng.random() < cfg.p_mutation:
            child = problem.mutate(child, rng)
        children.append(child)
    return children


def evolve_generation(pop, cfg, problem, repetition=0, generation=1, next_id=None, mapper=map):
    """One generation: lambda offspring, then mu survivors from parents + offspring."""
    if next_id is None:
        next_id = max(ind.id for ind in pop) + 1
    genotypes = make_offspring(pop, cfg, problem, repetition, generation)
    offspring = [
        Individual(g, tuple(objs), id=next_id + i, body=body, result=res)
        for i, (g, (objs, body, res)) in enumerate(zip(genotypes, evaluate_all(problem, genotypes, mapper)))
    ]
    pool = pop + offspring
    if cfg.survivor_selection == "nsga2_truncation":
        keep = truncation_survivors(pool, cfg.mu)
    else:
        rng = stream(cfg.seed, repetition, generation, _SURVIVORS)
        keep = tournament_survivors(pool, cfg.mu, cfg.tournament_k, key_for(cfg.mode), rng)
    survivors = [pool[i] for i in keep]
    rank_population(survivors)
    return survivors


def evolve(problem, cfg, repetition=0, mapper=map, on_generation=None) -> list[Individual]:
    """Full run; ``on_generation(generation, population)`` sees each survivor set."""
    pop = initial_population(problem, cfg, repetition, mapper)
    next_id = cfg.mu
    for gen in range(1, cfg.generations + 1):
        pop = evolve_generation(pop, cfg, problem, repetition, gen, next_id, mapper)
        next_id += cfg.lam
        if on_generation is not None:
            on_generation(gen, pop)
    return pop
