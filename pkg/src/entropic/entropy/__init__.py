"""Shannon cone, projection onto marginal scenarios and entropic inequalities."""

from .cone import elemental_inequalities, independence_equations, shannon_cone
from .formatting import equation_lines, facet_rows, facet_table, used_columns
from .inequality import (
    EntropicInequality,
    InequalityClass,
    Reduction,
    Triviality,
    classify,
    evaluate,
    mutual_information_form,
    reduce,
    triviality_filter,
)
from .projection import ProjectionResult, project
from .vector import (
    EntropySpace,
    EntropyVector,
    Subset,
    as_subset,
    binary_entropy,
    shannon_entropy,
)

__all__ = [
    "elemental_inequalities",
    "independence_equations",
    "shannon_cone",
    "equation_lines",
    "facet_rows",
    "facet_table",
    "used_columns",
    "EntropicInequality",
    "InequalityClass",
    "Reduction",
    "Triviality",
    "classify",
    "evaluate",
    "mutual_information_form",
    "reduce",
    "triviality_filter",
    "ProjectionResult",
    "project",
    "EntropySpace",
    "EntropyVector",
    "Subset",
    "as_subset",
    "binary_entropy",
    "shannon_entropy",
]
