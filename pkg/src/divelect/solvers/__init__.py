from .brute import BRUTE_FORCE_CAP, FloorConstraint, ScoreConstraint, brute_force, iter_committees
from .dsat import DSAT_LIMIT, dsat_exact
from .exchange import dscr_exchange_lc
from .greedy import fill_counts, greedy_indices, max_diversity_greedy
from .knapsack import DEFAULT_CAP_CELLS, KnapsackInstance, cap_cells, knapsack_dp
from .knapsack_dscr import (
    dscr_decision_max,
    dscr_knapsack_decision,
    dscr_knapsack_max,
    dscr_weighted_si,
    shifted_simpson,
    shifted_threshold,
)
from .outcome import SolverOutcome, Status

__all__ = [
    "BRUTE_FORCE_CAP", "DEFAULT_CAP_CELLS", "DSAT_LIMIT",
    "FloorConstraint", "KnapsackInstance", "ScoreConstraint", "SolverOutcome", "Status",
    "brute_force", "cap_cells", "dscr_decision_max", "dscr_exchange_lc", "dscr_knapsack_decision",
    "dscr_knapsack_max", "dscr_weighted_si", "dsat_exact", "fill_counts", "greedy_indices",
    "iter_committees", "knapsack_dp", "max_diversity_greedy", "shifted_simpson", "shifted_threshold",
]
