"""Exact polyhedral geometry: expressions, LPs, redundancy and projection."""

from .fourier_motzkin import (
    EliminationReport,
    EliminationStep,
    choose_coordinate,
    fm_eliminate,
    project_out,
    substitute,
)
from .linear import (
    LinearExpr,
    LinearSystem,
    as_rational,
    canonicalize,
    canonicalize_equation,
    solve_linear_system,
)
from .redundancy import (
    FarkasCertificate,
    farkas_certificate,
    is_implied,
    is_implied_exact,
    remove_redundant,
    verify_certificate,
)
from .simplex import LPResult, LPStatus, lp_solve, solve_standard_form

__all__ = [
    "LinearExpr",
    "LinearSystem",
    "as_rational",
    "canonicalize",
    "canonicalize_equation",
    "solve_linear_system",
    "LPResult",
    "LPStatus",
    "lp_solve",
    "solve_standard_form",
    "FarkasCertificate",
    "farkas_certificate",
    "is_implied",
    "is_implied_exact",
    "remove_redundant",
    "verify_certificate",
    "EliminationReport",
    "EliminationStep",
    "choose_coordinate",
    "fm_eliminate",
    "project_out",
    "substitute",
]
