# Walk module - trapping problem with the trap at the hub
from walk.types import HittingDistribution, HittingMethod, HittingSummary, TrapSpec
from walk.solvers import exact_hitting_solve, level_collapsed_solve, solve_rational, transition_matrix
from walk.generating import (
    GeneratingFunction,
    closed_form_summary,
    generating_function_moments,
    hitting_distribution,
    mean_hitting_closed,
)
from walk.simulate import default_max_steps, simulate_walks

__all__ = [
    "HittingDistribution",
    "HittingMethod",
    "HittingSummary",
    "TrapSpec",
    "exact_hitting_solve",
    "level_collapsed_solve",
    "solve_rational",
    "transition_matrix",
    "GeneratingFunction",
    "closed_form_summary",
    "generating_function_moments",
    "hitting_distribution",
    "mean_hitting_closed",
    "default_max_steps",
    "simulate_walks",
]
