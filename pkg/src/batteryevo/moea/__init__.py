from .engine import EvolutionConfig, Individual, Problem, evolve, evolve_generation
from .pareto import crowding_distance, dominates, fast_nondominated_sort, hypervolume_2d

__all__ = [
    "EvolutionConfig", "Individual", "Problem", "evolve", "evolve_generation",
    "crowding_distance", "dominates", "fast_nondominated_sort", "hypervolume_2d",
]
