"""Exact branch-and-price solver for budget-constrained Bayesian Stackelberg security games."""

from ._core import (
    GameSG,
    GameSSG,
    NumericalFailure,
    ParseError,
    SizeGuard,
    SolveReport,
    ValidationError,
    enumerate_strategies,
    generate,
    instance_filename,
    load,
    parse,
    root_lp,
    save,
    solve,
    solve_multiple_lps,
    solve_sg,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "GameSG",
    "GameSSG",
    "NumericalFailure",
    "ParseError",
    "SizeGuard",
    "SolveReport",
    "ValidationError",
    "enumerate_strategies",
    "generate",
    "instance_filename",
    "load",
    "parse",
    "root_lp",
    "save",
    "solve",
    "solve_multiple_lps",
    "solve_sg",
    "verify",
]
