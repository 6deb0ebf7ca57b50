"""Item pricing on graphs: exact solvers, pricing algorithms, and the
adversarial-order simulator, backed by the C++ core."""

from _tollbooth import (  # noqa: F401
    adversary_for,
    competitive_ratio,
    gen_cycle_lb,
    gen_path_no_tie_lb,
    gen_random,
    gen_random_sets,
    gen_setpacking_hardness,
    gen_star_lb,
    gen_tree_d_integral,
    min_hitting_set,
    optimal_allocation,
    price,
    simulate,
    solve_primal_dual,
    validate_instance,
    worst_case_welfare,
)

__all__ = [
    "adversary_for",
    "competitive_ratio",
    "gen_cycle_lb",
    "gen_path_no_tie_lb",
    "gen_random",
    "gen_random_sets",
    "gen_setpacking_hardness",
    "gen_star_lb",
    "gen_tree_d_integral",
    "min_hitting_set",
    "optimal_allocation",
    "price",
    "simulate",
    "solve_primal_dual",
    "validate_instance",
    "worst_case_welfare",
]
