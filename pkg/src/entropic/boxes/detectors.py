"""Detector inefficiency models: an extra no-click outcome per observable."""

from fractions import Fraction
from typing import Union

import numpy as np

from ..entropy import EntropyVector, binary_entropy
from ..exceptions import ParameterError, ScenarioShapeError
from ..geometry import as_rational
from ..scenarios import MarginalScenario
from .model import MarginalModel

Efficiency = Union[float, Fraction, int, str]


def _efficiency(box: MarginalModel, eta: Efficiency):
    value = as_rational(eta) if box.is_exact and not isinstance(eta, float) else float(eta)
    if not 0 <= value <= 1:
        raise ParameterError(f"detector efficiency must lie in [0, 1], got {eta}")
    return value


def _require_pairwise(box: MarginalModel):
    if any(len(c) > 2 for c in box.tables):
        raise ScenarioShapeError("detector models need contexts of at most two observables")


def _extended_scenario(scenario: MarginalScenario) -> MarginalScenario:
    return MarginalScenario.create(
        scenario.observables,
        scenario.maximal_contexts,
        {name: k + 1 for name, k in scenario.cardinalities.items()},
        [(s, t) for s, t in scenario.independences],
        name=f"{scenario.name}+noclick" if scenario.name else "noclick",
        parties=scenario.parties,
    )


def _empty(shape, exact: bool) -> np.ndarray:
    if exact:
        table = np.empty(shape, dtype=object)
        table.fill(Fraction(0))
        return table
    return np.zeros(shape)


def single_detector(box: MarginalModel, eta: Efficiency) -> MarginalModel:
    """
    One detector for a whole context: with probability eta the ideal outcomes,
    otherwise every observable reports no-click (the last outcome index).
    """
    _require_pairwise(box)
    eta = _efficiency(box, eta)
    exact = box.is_exact and isinstance(eta, Fraction)
    scenario = _extended_scenario(box.scenario)
    tables = {}
    for context, table in box.tables.items():
        shape = tuple(k + 1 for k in table.shape)
        new = _empty(shape, exact)
        inner = tuple(slice(0, k) for k in table.shape)
        new[inner] = eta * table
        new[tuple(k - 1 for k in shape)] = 1 - eta
        tables[context] = new
    return MarginalModel.create(scenario, tables)


def two_detector(box: MarginalModel, eta: Efficiency) -> MarginalModel:
    """
    Independent detectors for the two observables of a context, each clicking
    with probability eta.
    """
    _require_pairwise(box)
    eta = _efficiency(box, eta)
    exact = box.is_exact and isinstance(eta, Fraction)
    scenario = _extended_scenario(box.scenario)
    tables = {}
    for context, table in box.tables.items():
        shape = tuple(k + 1 for k in table.shape)
        new = _empty(shape, exact)
        if len(context) == 1:
            new[: table.shape[0]] = eta * table
            new[-1] = 1 - eta
        else:
            k0, k1 = table.shape
            new[:k0, :k1] = eta * eta * table
            new[:k0, k1] = eta * (1 - eta) * table.sum(axis=1)
            new[k0, :k1] = (1 - eta) * eta * table.sum(axis=0)
            new[k0, k1] = (1 - eta) * (1 - eta)
        tables[context] = new
    return MarginalModel.create(scenario, tables)


def single_detector_entropies(entropies: EntropyVector, eta: float) -> EntropyVector:
    """H^eta(S) = eta H(S) + h(eta) for every nonempty context subset S."""
    h = binary_entropy(eta)
    return EntropyVector({s: eta * v + h for s, v in entropies.values.items()})


def click_pattern_entropy(eta: float) -> float:
    """Entropy of the four click patterns of two independent detectors: 2 h(eta)."""
    return 2 * binary_entropy(eta)


def two_detector_entropies(entropies: EntropyVector, eta: float) -> EntropyVector:
    """
    Closed form from the grouping rule:
    H^eta(X) = eta H(X) + h(eta) and
    H^eta(XY) = eta^2 H(XY) + eta (1 - eta) [H(X) + H(Y)] + 2 h(eta).
    """
    h = binary_entropy(eta)
    values = {}
    for subset, value in entropies.values.items():
        if len(subset) == 1:
            values[subset] = eta * value + h
        elif len(subset) == 2:
            x, y = (frozenset((name,)) for name in subset)
            values[subset] = (
                eta * eta * value
                + eta * (1 - eta) * (entropies.values[x] + entropies.values[y])
                + click_pattern_entropy(eta)
            )
        else:
            raise ScenarioShapeError("two-detector closed form needs subsets of size at most 2")
    return EntropyVector(values)
