"""Projection of the Shannon cone onto the entropies of a marginal scenario."""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..exceptions import ParameterError
from ..geometry import (
    EliminationReport,
    EliminationStep,
    LinearSystem,
    project_out,
    remove_redundant,
    substitute,
)
from ..scenarios import MarginalScenario
from .cone import independence_equations, shannon_cone
from .inequality import EntropicInequality, Reduction
from .vector import EntropySpace, Subset

logger = logging.getLogger(__name__)

MAX_PROJECTION_OBSERVABLES = 5


@dataclass
class ProjectionResult:
    """Facets and equations of the projected cone, in a deterministic order."""

    scenario: MarginalScenario
    coordinates: list[Subset]
    equations: list[EntropicInequality]
    facets: list[EntropicInequality]
    reductions: list[Reduction] = field(default_factory=list)
    report: EliminationReport = field(default_factory=EliminationReport)
    elapsed: float = 0.0

    @property
    def space(self) -> EntropySpace:
        return EntropySpace(self.scenario.observables)

    def to_dict(self) -> dict:
        space = self.space
        return {
            "scenario": self.scenario.to_dict(),
            "coordinates": [space.name(s) for s in self.coordinates],
            "equations": [eq.to_dict(space) for eq in self.equations],
            "facets": [facet.to_dict(space) for facet in self.facets],
            "elimination": self.report.to_dict(),
        }


def _pivot(space: EntropySpace, names, marginal: set[str]) -> tuple[str, bool]:
    """Largest non-marginal coordinate if any, else the largest marginal one."""
    inner = [n for n in names if n not in marginal]
    pool = inner or list(names)
    best = max(pool, key=lambda n: space.sort_key(space.subset(n)))
    return best, not inner


def _implicit_equations(system: LinearSystem) -> list:
    """Pairs f <= 0, -f <= 0 in an irredundant system are equations f = 0."""
    keys = {expr.key(): expr for expr in system.inequalities}
    found = []
    for expr in system.inequalities:
        if (-expr).key() in keys and (-expr).key() > expr.key():
            found.append(expr)
    return found


def project(
    scenario: MarginalScenario,
    *,
    workers: Optional[int] = None,
    cap: Optional[int] = None,
    progress: Optional[Callable[[EliminationStep], None]] = None,
) -> ProjectionResult:
    """
    Project the Shannon cone (with the scenario's independence equations)
    onto the joint entropies of its contexts.

    Equations are used first: ones containing a non-context entropy remove
    it by substitution, ones purely among context entropies become output
    equations and remove their largest entropy from the basis. The remaining
    non-context entropies are eliminated by Fourier-Motzkin with redundancy
    removal after every step.

    Args:
        scenario: Scenario with at most 5 observables
        workers: Threads for redundancy screening
        cap: Inequality cap (ProjectionLimitError above it)
        progress: Callback per elimination step

    Returns:
        ProjectionResult with facets sorted lexicographically
    """
    if scenario.n > MAX_PROJECTION_OBSERVABLES:
        raise ParameterError(
            f"projection supports at most {MAX_PROJECTION_OBSERVABLES} observables, "
            f"got {scenario.n}"
        )
    started = time.perf_counter()
    space = EntropySpace(scenario.observables)
    marginal = {space.name(c) for c in scenario.contexts}

    cone = shannon_cone(scenario.observables)
    system = cone.with_constraints(equations=independence_equations(scenario))
    logger.info(
        "projecting %s: %d coordinates, %d inequalities, %d equations, %d context entropies",
        scenario.name or "scenario", len(system.coordinates), system.size,
        len(system.equations), len(marginal),
    )

    reductions: list[Reduction] = []
    output_equations: list[EntropicInequality] = []
    while system.equations:
        equation = system.equations[0]
        pivot, among_contexts = _pivot(space, equation.coeffs, marginal)
        if among_contexts:
            recorded = EntropicInequality.from_expr(equation, "=")
            output_equations.append(recorded)
            reductions.append((space.subset(pivot), recorded))
        system = substitute(system, equation, pivot)

    inner = [name for name in system.coordinates if name not in marginal]
    system, report = project_out(system, inner, cap=cap, workers=workers, progress=progress)

    while True:
        implicit = _implicit_equations(system)
        if not implicit:
            break
        equation = implicit[0]
        logger.info("implicit equation among context entropies: %s", equation.format())
        pivot, _ = _pivot(space, equation.coeffs, marginal)
        recorded = EntropicInequality.from_expr(equation, "=")
        output_equations.append(recorded)
        reductions.append((space.subset(pivot), recorded))
        system = LinearSystem(
            system.coordinates,
            [e for e in system.inequalities if e.key() not in (equation.key(), (-equation).key())],
            [equation],
        )
        system = remove_redundant(substitute(system, equation, pivot), workers=workers)

    coordinates = space.sort(space.subset(name) for name in system.coordinates)
    facets = sorted(
        (EntropicInequality.from_expr(expr) for expr in system.inequalities),
        key=lambda facet: facet.vector(coordinates),
    )
    elapsed = time.perf_counter() - started
    logger.info(
        "projection of %s done: %d equations, %d facets in %.1fs",
        scenario.name or "scenario", len(output_equations), len(facets), elapsed,
    )
    return ProjectionResult(
        scenario=scenario,
        coordinates=coordinates,
        equations=output_equations,
        facets=facets,
        reductions=reductions,
        report=report,
        elapsed=elapsed,
    )
