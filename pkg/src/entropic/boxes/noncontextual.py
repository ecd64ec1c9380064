"""Hidden-variable (noncontextuality) LP and sampling oracles."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from ..config import config
from ..exceptions import SizeLimitError
from ..geometry import LPStatus, solve_standard_form
from ..scenarios import MarginalScenario, bilocality
from ..scenarios import chsh as chsh_scenario
from .model import MarginalModel

logger = logging.getLogger(__name__)

MAX_ASSIGNMENTS = 10**6
MAX_EXACT_ASSIGNMENTS = 256


@dataclass
class HiddenVariableCertificate:
    """A joint distribution over global assignments, observables in scenario order."""

    observables: tuple[str, ...]
    joint: dict[tuple[int, ...], object]

    def marginal_table(
        self, context: tuple[str, ...], shape: tuple[int, ...], exact: bool
    ) -> np.ndarray:
        positions = [self.observables.index(name) for name in context]
        table = np.empty(shape, dtype=object) if exact else np.zeros(shape)
        if exact:
            table.fill(Fraction(0))
        for assignment, weight in self.joint.items():
            table[tuple(assignment[p] for p in positions)] += weight
        return table

    def reproduces(self, box: MarginalModel, tolerance: float = 1e-9) -> bool:
        """Marginalizes to every context table."""
        for context, table in box.tables.items():
            derived = self.marginal_table(context, table.shape, box.is_exact and tolerance == 0)
            gap = max(abs(float(a) - float(b)) for a, b in zip(derived.flat, table.flat))
            if gap > tolerance:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "observables": list(self.observables),
            "joint": {
                ",".join(map(str, k)): (str(v) if isinstance(v, Fraction) else float(v))
                for k, v in sorted(self.joint.items())
                if v != 0
            },
        }


@dataclass
class NoncontextualityResult:
    noncontextual: bool
    certificate: Optional[HiddenVariableCertificate] = None
    exact: bool = False

    def __bool__(self) -> bool:
        return self.noncontextual


def _assignments(scenario: MarginalScenario) -> list[tuple[int, ...]]:
    return list(product(*(range(scenario.cardinalities[n]) for n in scenario.observables)))


def _constraint_rows(box: MarginalModel, assignments: list[tuple[int, ...]]):
    """One row per (maximal context, outcome): which assignments agree with it."""
    index = {name: i for i, name in enumerate(box.scenario.observables)}
    rows: list[tuple[tuple[str, ...], tuple[int, ...]]] = []
    for context, table in box.tables.items():
        for outcome in product(*(range(k) for k in table.shape)):
            rows.append((context, outcome))
    membership = []
    for context, outcome in rows:
        positions = [index[name] for name in context]
        membership.append([
            j for j, g in enumerate(assignments)
            if all(g[p] == o for p, o in zip(positions, outcome))
        ])
    values = [box.tables[context][outcome] for context, outcome in rows]
    return membership, values


def is_noncontextual(box: MarginalModel, exact: Optional[bool] = None) -> NoncontextualityResult:
    """
    Decide whether a joint distribution over all observables reproduces the box.

    Exact boxes with at most MAX_EXACT_ASSIGNMENTS global assignments are
    decided by the exact simplex; others by HiGHS with the certificate
    checked at the violation tolerance.

    Raises:
        SizeLimitError: more than 10^6 global assignments
    """
    count = prod(box.scenario.cardinalities.values())
    if count > MAX_ASSIGNMENTS:
        raise SizeLimitError("noncontextuality LP", count, MAX_ASSIGNMENTS)
    if exact is None:
        exact = box.is_exact and count <= MAX_EXACT_ASSIGNMENTS
    assignments = _assignments(box.scenario)
    membership, values = _constraint_rows(box, assignments)

    if exact:
        a_eq = []
        for members in membership:
            row = [Fraction(0)] * count
            for j in members:
                row[j] = Fraction(1)
            a_eq.append(row)
        b_eq = [Fraction(v) for v in values]
        result = solve_standard_form(a_eq, b_eq, [Fraction(0)] * count)
        if result.status != LPStatus.OPTIMAL:
            return NoncontextualityResult(False, exact=True)
        joint = {g: w for g, w in zip(assignments, result.solution) if w != 0}
        return NoncontextualityResult(
            True, HiddenVariableCertificate(box.scenario.observables, joint), exact=True
        )

    a_eq = np.zeros((len(membership), count))
    for i, members in enumerate(membership):
        a_eq[i, members] = 1.0
    b_eq = np.array([float(v) for v in values])
    res = linprog(np.zeros(count), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * count, method="highs")
    if res.status != 0:
        return NoncontextualityResult(False)
    weights = np.clip(res.x, 0.0, None)
    joint = {g: float(w) for g, w in zip(assignments, weights) if w > 0}
    certificate = HiddenVariableCertificate(box.scenario.observables, joint)
    if not certificate.reproduces(box, config.tolerances.violation):
        return NoncontextualityResult(False)
    return NoncontextualityResult(True, certificate)


def box_from_joint(
    scenario: MarginalScenario, certificate: HiddenVariableCertificate, exact: bool = False
) -> MarginalModel:
    tables = {}
    for context in scenario.maximal_contexts:
        names = scenario.order(context)
        shape = tuple(scenario.cardinalities[n] for n in names)
        tables[names] = certificate.marginal_table(names, shape, exact)
    return MarginalModel.create(scenario, tables)


def sample_noncontextual_box(
    scenario: MarginalScenario,
    rng: np.random.Generator,
    concentration: float = 0.3,
) -> tuple[MarginalModel, HiddenVariableCertificate]:
    """Random joint distribution (Dirichlet) marginalized to the scenario's contexts."""
    assignments = _assignments(scenario)
    if len(assignments) > MAX_ASSIGNMENTS:
        raise SizeLimitError("joint distribution", len(assignments), MAX_ASSIGNMENTS)
    weights = rng.dirichlet(np.full(len(assignments), concentration))
    certificate = HiddenVariableCertificate(
        scenario.observables, {g: float(w) for g, w in zip(assignments, weights)}
    )
    return box_from_joint(scenario, certificate), certificate


def _stochastic(rng: np.random.Generator, shape: tuple[int, ...], outcomes: int) -> np.ndarray:
    """Random conditional distributions, normalized along the last axis."""
    return rng.dirichlet(np.full(outcomes, 0.5), size=shape)


def sample_bilocal_box(
    rng: np.random.Generator,
    hidden: int = 4,
    b_outcomes: int = 2,
) -> MarginalModel:
    """
    A bilocal box: independent sources l1, l2 with local responses
    P(a|x,l1), P(b|l1,l2), P(c|z,l2).
    """
    p1 = rng.dirichlet(np.full(hidden, 0.5))
    p2 = rng.dirichlet(np.full(hidden, 0.5))
    alice = _stochastic(rng, (2, hidden), 2)  # [x, l1, a]
    bob = _stochastic(rng, (hidden, hidden), b_outcomes)  # [l1, l2, b]
    charlie = _stochastic(rng, (2, hidden), 2)  # [z, l2, c]
    scenario = bilocality(b_outcomes)
    tables = {}
    for x in (0, 1):
        for z in (0, 1):
            table = np.einsum(
                "i,j,ia,ijb,jc->abc", p1, p2, alice[x], bob, charlie[z]
            )
            tables[(f"A{x}", "B", f"C{z}")] = table
    return MarginalModel.create(scenario, tables)


def nosignaling_chsh_vertices() -> list[np.ndarray]:
    """
    The 24 vertices of the two-outcome CHSH no-signaling polytope as
    [x, y, a, b] arrays: 16 local deterministic boxes and 8 PR variants.
    """
    vertices = []
    for fa in product((0, 1), repeat=2):
        for fb in product((0, 1), repeat=2):
            v = np.zeros((2, 2, 2, 2))
            for x, y in product((0, 1), repeat=2):
                v[x, y, fa[x], fb[y]] = 1.0
            vertices.append(v)
    for alpha, beta, gamma in product((0, 1), repeat=3):
        v = np.zeros((2, 2, 2, 2))
        for x, y, a, b in product((0, 1), repeat=4):
            if a ^ b == (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma:
                v[x, y, a, b] = 0.5
        vertices.append(v)
    return vertices


def sample_nosignaling_chsh_box(
    rng: np.random.Generator, concentration: float = 0.3
) -> MarginalModel:
    """Random mixture of the no-signaling polytope's vertices."""
    vertices = nosignaling_chsh_vertices()
    weights = rng.dirichlet(np.full(len(vertices), concentration))
    mixed = sum(w * v for w, v in zip(weights, vertices))
    scenario = chsh_scenario()
    (a0, a1), (b0, b1) = scenario.parties
    tables = {
        (alice, bob): mixed[x, y]
        for x, alice in enumerate((a0, a1))
        for y, bob in enumerate((b0, b1))
    }
    return MarginalModel.create(scenario, tables)
