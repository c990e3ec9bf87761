"""Exact solvers: GMC integer program, lazy DGMC loop, oracle and LP export."""
from .dgmc import (
    CliqueState,
    InfeasibleInstanceError,
    add_separation_cuts,
    compute_gap,
    separation_violations,
    solve_dgmc,
    solve_gmc,
)
from .exact import solve_bnb, solve_exact, solve_highs
from .lpfile import LPFormatError, export_lp, import_solution, write_lp
from .model import FEASIBLE, INFEASIBLE, OPTIMAL, TIMEOUT, CoverModel, SolveResult, build_gmc_model
from .oracle import OracleSizeError, brute_force_oracle

__all__ = [
    "CliqueState", "CoverModel", "FEASIBLE", "INFEASIBLE", "InfeasibleInstanceError",
    "LPFormatError", "OPTIMAL", "OracleSizeError", "SolveResult", "TIMEOUT",
    "add_separation_cuts", "brute_force_oracle", "build_gmc_model", "compute_gap",
    "export_lp", "import_solution", "separation_violations", "solve_bnb", "solve_dgmc",
    "solve_exact", "solve_gmc", "solve_highs", "write_lp",
]
