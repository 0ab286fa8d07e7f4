"""Exact minimization of OBDD and ZDD size over variable orders.

Variables are 0-based in the API (variable ``i`` is written ``x{i+1}`` in
expressions and reports).  Truth tables put variable ``i`` at bit ``i`` of the
row index.
"""
from .boolfn import ParseError, TruthTable, parse_expression
from .diagram import Diagram, Kind, VariableOrder, build_diagram
from .dnc import ConfigError, DncConfig, Level, opt_obdd, opt_obdd_composed, preset
from .fs_engine import FsState, fs_star, fs_star_truncated, min_obdd_fs
from .kernels import BACKEND
from .oracle import brute_force_min, enumerate_costs
from .params import ParamSolution, composition_chain, solve_system
from .qsearch import Mode, find_min

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConfigError",
    "Diagram",
    "DncConfig",
    "FsState",
    "Kind",
    "Level",
    "Mode",
    "ParamSolution",
    "ParseError",
    "TruthTable",
    "VariableOrder",
    "brute_force_min",
    "build_diagram",
    "composition_chain",
    "enumerate_costs",
    "find_min",
    "fs_star",
    "fs_star_truncated",
    "min_obdd_fs",
    "opt_obdd",
    "opt_obdd_composed",
    "parse_expression",
    "preset",
    "solve_system",
]
