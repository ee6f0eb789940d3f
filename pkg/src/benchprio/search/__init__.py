from benchprio.search.engine import Individual, ParetoFront, SearchConfig, run_search
from benchprio.search.hypervolume import hypervolume, hv_indicator_matrix
from benchprio.search.operators import pmx_crossover, swap_mutation
from benchprio.search.postprocess import apply_car, select_solution

__all__ = [
    "Individual",
    "ParetoFront",
    "SearchConfig",
    "apply_car",
    "hv_indicator_matrix",
    "hypervolume",
    "pmx_crossover",
    "run_search",
    "select_solution",
    "swap_mutation",
]
