"""Implication tests and redundancy removal with exact certificates."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..config import config
from .linear import LinearExpr, LinearSystem, canonicalize, solve_linear_system
from .screening import DenseSystem, ScreenResult
from .simplex import LPStatus, lp_solve

logger = logging.getLogger(__name__)


@dataclass
class FarkasCertificate:
    """
    Nonnegative multipliers proving `target <= 0` from a system.

    target = sum(ineq * lambda) + sum(eq * mu) + slack with slack <= 0 constant.
    """
    inequality_multipliers: dict[int, Fraction]
    equation_multipliers: dict[int, Fraction]
    slack: Fraction

    def to_dict(self) -> dict:
        return {
            "inequality_multipliers": {
                str(k): str(v) for k, v in self.inequality_multipliers.items()
            },
            "equation_multipliers": {
                str(k): str(v) for k, v in self.equation_multipliers.items()
            },
            "slack": str(self.slack),
        }


def _rationalize(value: float) -> Fraction:
    return Fraction(value).limit_denominator(10**6)


def verify_certificate(
    target: LinearExpr,
    inequalities: Sequence[LinearExpr],
    equations: Sequence[LinearExpr],
    certificate: FarkasCertificate,
) -> bool:
    """Exact check that the certificate proves `target <= 0`."""
    if any(v < 0 for v in certificate.inequality_multipliers.values()):
        return False
    combo = LinearExpr()
    for i, lam in certificate.inequality_multipliers.items():
        combo = combo + inequalities[i].scale(lam)
    for j, mu in certificate.equation_multipliers.items():
        combo = combo + equations[j].scale(mu)
    difference = target - combo
    return difference.is_constant() and difference.constant <= 0


def _certificate_from_support(
    target: LinearExpr,
    inequalities: Sequence[LinearExpr],
    equations: Sequence[LinearExpr],
    support: Sequence[int],
    coordinates: Sequence[str],
) -> Optional[FarkasCertificate]:
    """Solve for exact multipliers on a guessed support and check their signs."""
    columns = [inequalities[i] for i in support] + list(equations)
    rows = [[expr.coefficient(name) for expr in columns] for name in coordinates]
    rhs = [target.coefficient(name) for name in coordinates]
    solution = solve_linear_system(rows, rhs)
    if solution is None:
        return None
    lambdas = {i: solution[pos] for pos, i in enumerate(support)}
    mus = {j: solution[len(support) + j] for j in range(len(equations))}
    if any(v < 0 for v in lambdas.values()):
        return None
    slack = target.constant - sum(
        (lam * inequalities[i].constant for i, lam in lambdas.items()), Fraction(0)
    ) - sum((mu * equations[j].constant for j, mu in mus.items()), Fraction(0))
    if slack > 0:
        return None
    return FarkasCertificate(
        {i: v for i, v in lambdas.items() if v != 0},
        {j: v for j, v in mus.items() if v != 0},
        slack,
    )


def farkas_certificate(inequality: LinearExpr, system: LinearSystem) -> Optional[FarkasCertificate]:
    """
    Find exact multipliers proving that `system` implies `inequality <= 0`.

    Uses the HiGHS dual as a support guess, then solves for the multipliers
    exactly. Returns None when no certificate is found this way.
    """
    dense = DenseSystem(
        system.coordinates, list(system.inequalities) + [inequality], system.equations
    )
    k = len(system.inequalities)
    screen = dense.maximize_row(k, range(k + 1))
    if screen.status != "bounded" or screen.value > config.geometry.screening_margin:
        return None
    return _certify(inequality, system.inequalities, system.equations, screen, system.coordinates)


def _certify(
    target: LinearExpr,
    inequalities: Sequence[LinearExpr],
    equations: Sequence[LinearExpr],
    screen: ScreenResult,
    coordinates: Sequence[str],
) -> Optional[FarkasCertificate]:
    tolerance = config.tolerances.certificate
    weights = screen.ineq_multipliers
    support = [i for i in range(len(inequalities)) if weights[i] > tolerance]
    certificate = _certificate_from_support(target, inequalities, equations, support, coordinates)
    if certificate is None:
        # retry with rounded multipliers, which often repairs degenerate supports
        lambdas = {i: _rationalize(weights[i]) for i in support}
        mus = {j: _rationalize(v) for j, v in enumerate(screen.eq_multipliers)}
        combo = LinearExpr()
        for i, lam in lambdas.items():
            combo = combo + inequalities[i].scale(lam)
        for j, mu in mus.items():
            combo = combo + equations[j].scale(mu)
        difference = target - combo
        if difference.is_constant() and difference.constant <= 0:
            certificate = FarkasCertificate(lambdas, mus, difference.constant)
    return certificate


def is_implied_exact(inequality: LinearExpr, system: LinearSystem) -> bool:
    """Exact simplex test: max of the left-hand side over the system is <= 0."""
    result = lp_solve(inequality, "max", system)
    if result.status == LPStatus.INFEASIBLE:
        return True
    if result.status == LPStatus.UNBOUNDED:
        return False
    return result.value <= 0


def is_implied(inequality: LinearExpr, system: LinearSystem) -> bool:
    """
    Decide exactly whether every point of `system` satisfies `inequality <= 0`.

    A float LP proposes a certificate; anything not certified is settled by
    the exact simplex.
    """
    if inequality.is_constant():
        return inequality.constant <= 0 or is_implied_exact(inequality, system)
    if config.geometry.float_screening:
        certificate = farkas_certificate(inequality, system)
        if certificate is not None:
            return True
    return is_implied_exact(inequality, system)


def remove_redundant(
    system: LinearSystem,
    *,
    screening: Optional[bool] = None,
    workers: Optional[int] = None,
) -> LinearSystem:
    """
    Drop every inequality implied by the others (and the equations).

    Float screening marks inequalities that are certainly irredundant (their
    maximum over the others exceeds the margin). The remaining candidates are
    processed one by one in input order and removed only with an exact proof,
    so the result does not depend on the worker count.

    Args:
        system: The system to reduce
        screening: Use HiGHS screening (defaults to config)
        workers: Thread count for screening LPs (defaults to config)

    Returns:
        Equivalent system with an irredundant inequality list in input order
    """
    screening = config.geometry.float_screening if screening is None else screening
    workers = workers or config.geometry.workers
    inequalities = list(system.inequalities)
    equations = list(system.equations)
    count = len(inequalities)
    if count <= 1:
        return LinearSystem(system.coordinates, inequalities, equations)

    margin = config.geometry.screening_margin
    dense = DenseSystem(system.coordinates, inequalities, equations) if screening else None
    candidates = list(range(count))
    if screening:
        every = list(range(count))

        def screen(k: int) -> ScreenResult:
            return dense.maximize_row(k, every)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(screen, every))
        else:
            results = [screen(k) for k in every]
        candidates = [
            k for k, r in enumerate(results)
            if not (r.status == "unbounded" or (r.status == "bounded" and r.value > margin))
        ]

    removed: set[int] = set()
    for k in candidates:
        active = [i for i in range(count) if i != k and i not in removed]
        target = inequalities[k]
        implied = False
        if screening:
            screen = dense.maximize_row(k, active + [k])
            if screen.status == "bounded" and screen.value <= margin:
                others = [inequalities[i] for i in active]
                reindexed = ScreenResult(
                    screen.status,
                    screen.value,
                    screen.ineq_multipliers[active],
                    screen.eq_multipliers,
                )
                certificate = _certify(target, others, equations, reindexed, system.coordinates)
                implied = certificate is not None
        if not implied:
            rest = LinearSystem(system.coordinates, [inequalities[i] for i in active], equations)
            implied = is_implied_exact(target, rest)
        if implied:
            removed.add(k)

    kept = [inequalities[i] for i in range(count) if i not in removed]
    logger.debug(
        "redundancy: %d -> %d inequalities (%d screened candidates)",
        count, len(kept), len(candidates),
    )
    return LinearSystem(system.coordinates, kept, equations)


def deduplicate(expressions: Sequence[LinearExpr]) -> list[LinearExpr]:
    """Canonicalize and drop repeats, keeping first occurrences."""
    seen = set()
    result = []
    for expr in expressions:
        canonical = canonicalize(expr)
        if canonical.key() not in seen:
            seen.add(canonical.key())
            result.append(canonical)
    return result
