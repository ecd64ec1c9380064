"""Standard Bell, contextuality and bilocality expressions evaluated on boxes."""

from typing import Optional, Sequence

import numpy as np

from ..entropy import EntropicInequality, EntropySpace, EntropyVector, evaluate
from ..exceptions import ParameterError, ScenarioError, ScenarioShapeError
from ..scenarios import MarginalScenario, bilocality, symmetries
from .entropy import entropy_vector
from .model import MarginalModel


def _chsh_names(scenario: MarginalScenario) -> tuple[str, str, str, str]:
    parties = scenario.parties
    if parties is None or len(parties) != 2 or any(len(p) != 2 for p in parties):
        raise ScenarioShapeError(
            f"expected a bipartite two-setting scenario, got {scenario.name or '?'}"
        )
    (a0, a1), (b0, b1) = parties
    return a0, a1, b0, b1


def _require_binary(box: MarginalModel, names: Sequence[str]):
    for name in names:
        if box.scenario.cardinalities[name] != 2:
            raise ScenarioShapeError(f"{name} must have two outcomes (+1/-1)")


def correlator(box: MarginalModel, first: str, second: str) -> float:
    """<XY> with outcome index a standing for the value (-1)^a."""
    _require_binary(box, (first, second))
    table = box.marginal((first, second))
    signs = np.array([[1, -1], [-1, 1]])
    return float(np.sum(table.astype(float) * signs))


def chsh(box: MarginalModel) -> float:
    """<A0B0> + <A0B1> + <A1B0> - <A1B1>."""
    a0, a1, b0, b1 = _chsh_names(box.scenario)
    return (
        correlator(box, a0, b0) + correlator(box, a0, b1)
        + correlator(box, a1, b0) - correlator(box, a1, b1)
    )


def chsh_variants(box: MarginalModel) -> list[float]:
    """The eight CHSH expressions: each choice of minus sign, both overall signs."""
    a0, a1, b0, b1 = _chsh_names(box.scenario)
    terms = [
        correlator(box, a0, b0), correlator(box, a0, b1),
        correlator(box, a1, b0), correlator(box, a1, b1),
    ]
    total = sum(terms)
    values = []
    for k in range(4):
        s = total - 2 * terms[k]
        values.extend([s, -s])
    return values


def chsh_max(box: MarginalModel) -> float:
    """Largest CHSH variant; a two-outcome box is local iff this is <= 2."""
    return max(chsh_variants(box))


def chsh_entropic(box: MarginalModel, entropies: Optional[EntropyVector] = None) -> float:
    """
    CHSH_E = I(A0:B0) + I(A0:B1) + I(A1:B0) - I(A1:B1) - H(A0) - H(B0).

    Any outcome count is allowed; positive values are violations.
    """
    a0, a1, b0, b1 = _chsh_names(box.scenario)
    h = entropies or entropy_vector(box)
    return (
        h.mutual_information(a0, b0) + h.mutual_information(a0, b1)
        + h.mutual_information(a1, b0) - h.mutual_information(a1, b1)
        - h[a0] - h[b0]
    )


def chsh_inequality(scenario: MarginalScenario) -> EntropicInequality:
    """CHSH_E <= 0 in joint-entropy normal form."""
    a0, a1, b0, b1 = _chsh_names(scenario)
    return EntropicInequality({
        (a1, b1): 1, (a0,): 1, (b0,): 1,
        (a0, b0): -1, (a0, b1): -1, (a1, b0): -1,
    })


def polygon_inequality(order: Sequence[str], i: int) -> EntropicInequality:
    """
    H(X_i X_i+1) + sum_{j != i, i+1} H(X_j) <= sum_{j != i} H(X_j X_j+1)
    over a cyclic observable order, 1 <= i <= n.
    """
    n = len(order)
    if not 1 <= i <= n:
        raise ParameterError(f"cycle index must lie in 1..{n}, got {i}")
    k = i - 1

    def pair(j: int) -> frozenset[str]:
        return frozenset((order[j % n], order[(j + 1) % n]))

    coeffs: dict[frozenset[str], int] = {pair(k): 1}
    for j in range(n):
        if j not in (k, (k + 1) % n):
            coeffs[frozenset((order[j],))] = 1
        if j != k:
            coeffs[pair(j)] = coeffs.get(pair(j), 0) - 1
    return EntropicInequality(coeffs)


def ncycle_entropic(
    box: MarginalModel,
    i: int,
    entropies: Optional[EntropyVector] = None,
    order: Optional[Sequence[str]] = None,
) -> float:
    """LHS - RHS of the i-th n-cycle entropic inequality; positive means violation."""
    try:
        order = tuple(order) if order is not None else box.scenario.cycle_order()
    except ScenarioError as exc:
        raise ScenarioShapeError(str(exc)) from exc
    inequality = polygon_inequality(order, i)
    return evaluate(inequality, entropies or entropy_vector(box))


def klyachko_k5(box: MarginalModel, order: Optional[Sequence[str]] = None) -> float:
    """Sum of <X_i X_i+1> around the 5-cycle; noncontextual boxes give >= -3."""
    try:
        order = tuple(order) if order is not None else box.scenario.cycle_order()
    except ScenarioError as exc:
        raise ScenarioShapeError(str(exc)) from exc
    if len(order) != 5:
        raise ScenarioShapeError(f"expected a 5-cycle, got {len(order)} observables")
    return sum(correlator(box, order[j], order[(j + 1) % 5]) for j in range(5))


BILOCAL_COLUMNS: tuple[tuple[str, ...], ...] = (
    ("A0",), ("A1",), ("B",), ("C0",), ("C1",),
    ("A0", "B"), ("A1", "B"), ("B", "C0"), ("B", "C1"),
    ("A0", "B", "C0"), ("A0", "B", "C1"), ("A1", "B", "C0"), ("A1", "B", "C1"),
)

# one representative per symmetry class, each row reads "<= 0"; rows 1-4 are trivial
BILOCAL_TABLE: tuple[tuple[int, ...], ...] = (
    (-1, 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 1, 0, 0, 0, -1, 0, 0, 0),
    (1, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 0),
    (0, 0, 1, 0, 0, -1, 0, -1, 0, 1, 0, 0, 0),
    (0, 1, 0, 1, 0, 1, -1, 0, 0, -1, 0, 0, 0),
    (0, 1, 0, 0, 1, 1, -1, 1, -1, -1, 0, 0, 0),
    (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, -1, 1),
    (1, 0, 0, 1, 0, -1, 1, 0, 0, -1, 1, 0, -1),
    (1, 0, 0, 1, 0, -1, 1, -1, 1, 1, -1, -1, 0),
    (0, 0, 0, 0, 0, 1, 0, 1, 0, -1, -1, -1, 1),
)


def bilocal_inequality(k: int) -> EntropicInequality:
    """Class representative k (1..10) of the entropic bilocality inequalities."""
    if not 1 <= k <= len(BILOCAL_TABLE):
        raise ParameterError(f"bilocality row must lie in 1..{len(BILOCAL_TABLE)}, got {k}")
    row = BILOCAL_TABLE[k - 1]
    return EntropicInequality({col: c for col, c in zip(BILOCAL_COLUMNS, row) if c})


def bilocal_inequalities() -> list[EntropicInequality]:
    """All members of the bilocality classes under the scenario's symmetry group."""
    group = symmetries(bilocality())
    members = {
        bilocal_inequality(k).permuted(g)
        for k in range(1, len(BILOCAL_TABLE) + 1)
        for g in group.elements
    }
    order = EntropySpace(group.observables).coordinates
    return sorted(members, key=lambda ineq: ineq.vector(order))


def _require_bilocality(box: MarginalModel):
    names = set(box.scenario.observables)
    if names != {"A0", "A1", "B", "C0", "C1"}:
        raise ScenarioShapeError(f"expected a bilocality box, got {box.scenario.name or '?'}")


def bilocal_row(box: MarginalModel, k: int, entropies: Optional[EntropyVector] = None) -> float:
    """LHS of bilocality row k; positive values witness non-bilocality."""
    _require_bilocality(box)
    return evaluate(bilocal_inequality(k), entropies or entropy_vector(box))


def check_bilocal_marginal(box: MarginalModel, tolerance: float = 1e-10) -> bool:
    """
    True iff the A-C marginal factorizes: sum_b P(a,b,c|x,z) = P(a|x) P(c|z).
    """
    _require_bilocality(box)
    for x in (0, 1):
        for z in (0, 1):
            joint = box.marginal((f"A{x}", f"C{z}")).astype(float)
            product = np.outer(joint.sum(axis=1), joint.sum(axis=0))
            if np.max(np.abs(joint - product)) > tolerance:
                return False
    return True
