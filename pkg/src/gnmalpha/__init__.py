"""Independence number of G(n, m): exact solver, extended sets, first-moment predictions."""

from .graph import Graph, InputError, make_graph, sample_gnm, sample_gnp
from .prediction import Params, k_vanilla, k_zero, predict
from .rng import SeedSpec
from .solver import AlphaResult, BudgetExceeded, alpha_bruteforce, alpha_exact

__all__ = [
    "Graph", "InputError", "make_graph", "sample_gnm", "sample_gnp",
    "Params", "k_vanilla", "k_zero", "predict", "SeedSpec",
    "AlphaResult", "BudgetExceeded", "alpha_bruteforce", "alpha_exact",
]
