"""Fourier-Motzkin elimination with equation substitution and pruning."""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from ..config import config
from ..exceptions import CoordinateError, ProjectionLimitError
from .linear import LinearExpr, LinearSystem
from .redundancy import deduplicate, remove_redundant

logger = logging.getLogger(__name__)


def substitute(system: LinearSystem, equation: LinearExpr, coordinate: str) -> LinearSystem:
    """
    Solve `equation = 0` for `coordinate` and substitute it everywhere.

    The equation itself is consumed and the coordinate removed.
    """
    c = equation.coefficient(coordinate)
    if c == 0:
        raise CoordinateError(f"equation does not contain {coordinate!r}")
    # coordinate = -(equation - c*coordinate) / c
    rest = LinearExpr(
        {k: v for k, v in equation.coeffs.items() if k != coordinate}, equation.constant
    )
    replacement = rest.scale(-1 / c)
    inequalities = [expr.substitute(coordinate, replacement) for expr in system.inequalities]
    equations = [
        expr.substitute(coordinate, replacement)
        for expr in system.equations
        if expr != equation
    ]
    return LinearSystem(
        tuple(name for name in system.coordinates if name != coordinate),
        inequalities,
        equations,
    )


def fm_eliminate(system: LinearSystem, coordinate: str) -> LinearSystem:
    """
    Project `coordinate` out of the system.

    An equation containing the coordinate is used for substitution; otherwise
    every inequality with a positive coefficient is combined with every one
    with a negative coefficient. The result is canonical and deduplicated but
    may still contain redundant inequalities.
    """
    if coordinate not in system.coordinates:
        raise CoordinateError(f"unknown coordinate {coordinate!r}")
    for equation in system.equations:
        if coordinate in equation.coeffs:
            return substitute(system, equation, coordinate)

    positive: list[LinearExpr] = []
    negative: list[LinearExpr] = []
    untouched: list[LinearExpr] = []
    for expr in system.inequalities:
        c = expr.coefficient(coordinate)
        if c > 0:
            positive.append(expr)
        elif c < 0:
            negative.append(expr)
        else:
            untouched.append(expr)

    combined: list[LinearExpr] = []
    for p in positive:
        a = p.coefficient(coordinate)
        for q in negative:
            b = -q.coefficient(coordinate)
            combo = p.scale(b) + q.scale(a)
            if combo.is_constant() and combo.constant <= 0:
                continue
            combined.append(combo)

    inequalities = untouched + (deduplicate(combined) if combined else [])
    return LinearSystem(
        tuple(name for name in system.coordinates if name != coordinate),
        inequalities,
        list(system.equations),
    )


def elimination_cost(system: LinearSystem, coordinate: str) -> int:
    """Number of pairwise combinations eliminating `coordinate` would create."""
    positive = negative = 0
    for expr in system.inequalities:
        c = expr.coefficient(coordinate)
        if c > 0:
            positive += 1
        elif c < 0:
            negative += 1
    return positive * negative


@dataclass
class EliminationStep:
    coordinate: str
    method: str  # "substitution" or "combination"
    before: int
    generated: int
    after: int

    def to_dict(self) -> dict:
        return {
            "coordinate": self.coordinate,
            "method": self.method,
            "before": self.before,
            "generated": self.generated,
            "after": self.after,
        }


@dataclass
class EliminationReport:
    steps: list[EliminationStep] = field(default_factory=list)

    @property
    def peak(self) -> int:
        return max((s.generated for s in self.steps), default=0)

    def to_dict(self) -> dict:
        return {"steps": [s.to_dict() for s in self.steps], "peak": self.peak}


def choose_coordinate(system: LinearSystem, candidates: Sequence[str]) -> tuple[str, str]:
    """
    Pick the next coordinate: one fixed by an equation if any, else the one
    with the fewest pairwise combinations (ties by coordinate order).
    """
    for equation in system.equations:
        for name in candidates:
            if name in equation.coeffs:
                return name, "substitution"
    best = min(
        candidates, key=lambda name: (elimination_cost(system, name), candidates.index(name))
    )
    return best, "combination"


def project_out(
    system: LinearSystem,
    coordinates: Sequence[str],
    *,
    prune: bool = True,
    cap: Optional[int] = None,
    workers: Optional[int] = None,
    progress: Optional[Callable[[EliminationStep], None]] = None,
) -> tuple[LinearSystem, EliminationReport]:
    """
    Eliminate several coordinates greedily, pruning redundancy after each step.

    Args:
        system: Starting system
        coordinates: Coordinates to eliminate
        prune: Remove redundant inequalities after each step
        cap: Abort with ProjectionLimitError above this many inequalities
        workers: Thread count for redundancy screening
        progress: Called with each completed step

    Returns:
        (projected system, elimination report)
    """
    cap = cap or config.geometry.max_inequalities
    remaining = [name for name in system.coordinates if name in set(coordinates)]
    report = EliminationReport()
    current = system
    while remaining:
        name, method = choose_coordinate(current, remaining)
        before = current.size
        current = fm_eliminate(current, name)
        generated = current.size
        if generated > cap:
            raise ProjectionLimitError(
                cap=cap,
                inequalities=generated,
                eliminated=len(report.steps),
                remaining=len(remaining),
                coordinate=name,
            )
        if prune:
            current = remove_redundant(current, workers=workers)
        remaining.remove(name)
        step = EliminationStep(name, method, before, generated, current.size)
        report.steps.append(step)
        logger.info(
            "eliminated %s by %s: %d -> %d -> %d inequalities (%d left)",
            name, method, before, generated, current.size, len(remaining),
        )
        if progress:
            progress(step)
    return current, report
