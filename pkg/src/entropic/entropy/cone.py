"""The Shannon cone and scenario independence equations."""

import logging
from itertools import combinations
from typing import Sequence

from ..exceptions import ParameterError
from ..geometry import LinearExpr, LinearSystem
from ..scenarios import MarginalScenario
from .vector import EntropySpace

logger = logging.getLogger(__name__)

MAX_CONE_OBSERVABLES = 6


def _term(space: EntropySpace, subset) -> dict[str, int]:
    # H(empty set) = 0 is never a coordinate
    return {space.name(subset): 1} if subset else {}


def _combine(space: EntropySpace, plus: Sequence, minus: Sequence) -> LinearExpr:
    coeffs: dict[str, int] = {}
    for subset in plus:
        for name, c in _term(space, subset).items():
            coeffs[name] = coeffs.get(name, 0) + c
    for subset in minus:
        for name, c in _term(space, subset).items():
            coeffs[name] = coeffs.get(name, 0) - c
    return LinearExpr(coeffs)


def elemental_inequalities(space: EntropySpace, observables: Sequence[str]) -> list[LinearExpr]:
    """
    Elemental Shannon inequalities on `observables`, written over `space`.

    Monotonicity H(N - i) <= H(N) for each i, and submodularity
    H(S+i+j) + H(S) <= H(S+i) + H(S+j) for i < j and S within N - {i, j}.
    """
    full = frozenset(observables)
    result = [_combine(space, [full - {name}], [full]) for name in observables]
    for i, j in combinations(observables, 2):
        rest = [name for name in observables if name not in (i, j)]
        for size in range(len(rest) + 1):
            for s in combinations(rest, size):
                base = frozenset(s)
                result.append(_combine(space, [base | {i, j}, base], [base | {i}, base | {j}]))
    return result


def shannon_cone(observables: Sequence[str]) -> LinearSystem:
    """
    The Shannon cone in elemental form over all 2^n - 1 joint entropies.

    Raises:
        ParameterError: n outside 1..6
    """
    n = len(observables)
    if not 1 <= n <= MAX_CONE_OBSERVABLES:
        raise ParameterError(
            f"shannon_cone supports 1 to {MAX_CONE_OBSERVABLES} observables, got {n}"
        )
    space = EntropySpace(observables)
    coordinates = space.names(space.coordinates)
    system = LinearSystem(coordinates, elemental_inequalities(space, observables))
    logger.debug("Shannon cone on %d observables: %d elemental inequalities", n, system.size)
    return system


def _subsets_largest_first(members: Sequence[str]) -> list[frozenset[str]]:
    return [
        frozenset(c)
        for size in range(len(members), 0, -1)
        for c in combinations(members, size)
    ]


def independence_equations(scenario: MarginalScenario) -> list[LinearExpr]:
    """
    Joint-entropy equations for each independence pair (S, T).

    H(S u T) - H(S) - H(T) = 0 comes first, followed by I(S':T') = 0 for all
    nonempty S' within S and T' within T (data processing).
    """
    space = EntropySpace(scenario.observables)
    equations: list[LinearExpr] = []
    seen = set()
    for s, t in scenario.independences:
        for left in _subsets_largest_first(scenario.order(s)):
            for right in _subsets_largest_first(scenario.order(t)):
                expr = _combine(space, [left | right], [left, right])
                if expr.key() not in seen:
                    seen.add(expr.key())
                    equations.append(expr)
    return equations
