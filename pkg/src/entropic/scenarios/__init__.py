"""Marginal scenarios and their symmetry groups."""

from .scenario import (
    BUILTIN_SCENARIOS,
    MarginalScenario,
    bell,
    bilocality,
    chained,
    builtin_scenario,
    chsh,
    dump_scenario,
    klyachko,
    load_scenario,
    ncycle,
    nonempty_subsets,
)
from .symmetry import SymmetryGroup, apply_permutation, compose, inverse, symmetries

__all__ = [
    "BUILTIN_SCENARIOS",
    "MarginalScenario",
    "bell",
    "bilocality",
    "chained",
    "builtin_scenario",
    "chsh",
    "dump_scenario",
    "klyachko",
    "load_scenario",
    "ncycle",
    "nonempty_subsets",
    "SymmetryGroup",
    "apply_permutation",
    "compose",
    "inverse",
    "symmetries",
]
