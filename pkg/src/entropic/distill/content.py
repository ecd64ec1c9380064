"""EPR2 nonlocal content: the smallest nonlocal weight in a local/nonlocal split."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from ..boxes import MarginalModel
from ..exceptions import SizeLimitError
from ..geometry import LPStatus, solve_standard_form
from .wiring import SETTINGS, Wiring, bipartite_tensor, box_from_tensor, outcome_count, wire

logger = logging.getLogger(__name__)

MAX_DETERMINISTIC = 10**4
MAX_EXACT_DETERMINISTIC = 81

Strategy = tuple[tuple[int, ...], tuple[int, ...]]


def local_deterministic_boxes(d: int) -> list[Strategy]:
    """
    Every pair of local response functions (a(x), b(y)), d^4 in total.

    Each strategy is ((a(0), a(1)), (b(0), b(1))).
    """
    responses = list(product(range(d), repeat=SETTINGS))
    return [(fa, fb) for fa in responses for fb in responses]


def deterministic_tensor(strategy: Strategy, d: int) -> np.ndarray:
    fa, fb = strategy
    tensor = np.zeros((SETTINGS, SETTINGS, d, d))
    for x, y in product(range(SETTINGS), repeat=2):
        tensor[x, y, fa[x], fb[y]] = 1.0
    return tensor


@dataclass
class Decomposition:
    """
    P = (1 - q) P^L + q P^NL with minimal q.

    Attributes:
        q: Nonlocal content in [0, 1]
        local_weights: Unnormalized weights (summing to 1 - q) of the
            deterministic strategies in P^L
        nonlocal_part: P^NL, or None when q = 0
        exact: Solved over the rationals
    """
    q: object
    local_weights: dict[Strategy, object] = field(default_factory=dict)
    nonlocal_part: Optional[MarginalModel] = None
    exact: bool = False

    def residual(self, box: MarginalModel) -> float:
        """Largest entrywise gap between the recombined box and `box`."""
        p = bipartite_tensor(box).astype(float)
        d = p.shape[2]
        total = np.zeros_like(p)
        for strategy, weight in self.local_weights.items():
            total += float(weight) * deterministic_tensor(strategy, d)
        if self.nonlocal_part is not None:
            total += float(self.q) * bipartite_tensor(self.nonlocal_part).astype(float)
        return float(np.max(np.abs(total - p)))

    def to_dict(self) -> dict:
        def number(value):
            return str(value) if isinstance(value, Fraction) else float(value)

        return {
            "q": number(self.q),
            "exact": self.exact,
            "local_weights": [
                {"alice": list(fa), "bob": list(fb), "weight": number(w)}
                for (fa, fb), w in sorted(self.local_weights.items())
                if w != 0
            ],
        }


def _coverage(strategies: list[Strategy], d: int) -> list[list[int]]:
    """For each entry (x, y, a, b), the strategies that put a 1 there."""
    entries = list(product(range(SETTINGS), range(SETTINGS), range(d), range(d)))
    index = {entry: r for r, entry in enumerate(entries)}
    rows: list[list[int]] = [[] for _ in entries]
    for k, (fa, fb) in enumerate(strategies):
        for x, y in product(range(SETTINGS), repeat=2):
            rows[index[(x, y, fa[x], fb[y])]].append(k)
    return rows


def nonlocal_content(box: MarginalModel, exact: Optional[bool] = None) -> Decomposition:
    """
    Maximize the local weight w subject to sum_k w_k D_k <= P entrywise; q = 1 - w.

    Exact rational boxes with at most MAX_EXACT_DETERMINISTIC strategies are
    solved by the exact simplex, others by HiGHS.

    Raises:
        SizeLimitError: more than 10^4 deterministic strategies
    """
    d = outcome_count(box)
    count = d ** 4
    if count > MAX_DETERMINISTIC:
        raise SizeLimitError("nonlocal content LP", count, MAX_DETERMINISTIC)
    if exact is None:
        exact = box.is_exact and count <= MAX_EXACT_DETERMINISTIC
    strategies = local_deterministic_boxes(d)
    coverage = _coverage(strategies, d)
    p = bipartite_tensor(box)
    values = [p[entry] for entry in product(range(SETTINGS), range(SETTINGS), range(d), range(d))]

    if exact:
        m = len(coverage)
        a_eq = []
        for r, members in enumerate(coverage):
            row = [Fraction(0)] * (count + m)
            for k in members:
                row[k] = Fraction(1)
            row[count + r] = Fraction(1)
            a_eq.append(row)
        costs = [Fraction(1)] * count + [Fraction(0)] * m
        result = solve_standard_form(
            a_eq, [Fraction(v) for v in values], costs, [count + r for r in range(m)]
        )
        if result.status != LPStatus.OPTIMAL:
            raise RuntimeError(f"nonlocal content LP returned {result.status.value}")
        weights = dict(zip(strategies, result.solution[:count]))
        q = 1 - result.value
    else:
        a_ub = np.zeros((len(coverage), count))
        for r, members in enumerate(coverage):
            a_ub[r, members] = 1.0
        res = linprog(
            -np.ones(count),
            A_ub=a_ub,
            b_ub=np.array([float(v) for v in values]),
            bounds=[(0, None)] * count,
            method="highs",
        )
        if res.status != 0:
            raise RuntimeError(f"nonlocal content LP failed: {res.message}")
        weights = dict(zip(strategies, np.clip(res.x, 0.0, None)))
        q = float(min(max(1.0 + res.fun, 0.0), 1.0))

    decomposition = Decomposition(q, {s: w for s, w in weights.items() if w != 0}, exact=exact)
    decomposition.nonlocal_part = _nonlocal_part(box, decomposition, exact)
    logger.debug("nonlocal content of %r: %s", box, q)
    return decomposition


def _nonlocal_part(
    box: MarginalModel, decomposition: Decomposition, exact: bool
) -> Optional[MarginalModel]:
    q = decomposition.q
    if q == 0 or (not exact and q < 1e-12):
        return None
    p = bipartite_tensor(box)
    d = p.shape[2]
    if exact:
        rest = p.copy()
        for (fa, fb), w in decomposition.local_weights.items():
            for x, y in product(range(SETTINGS), repeat=2):
                rest[x, y, fa[x], fb[y]] -= w
        return box_from_tensor(rest / q, box.scenario)
    rest = p.astype(float)
    for strategy, w in decomposition.local_weights.items():
        rest = rest - w * deterministic_tensor(strategy, d)
    return box_from_tensor(np.clip(rest, 0.0, None) / q, box.scenario, validate=False)


def distillation_gain(box: MarginalModel, wiring: Wiring) -> float:
    """Nonlocal content after two-copy wiring minus before; positive means distillation."""
    before = nonlocal_content(box).q
    after = nonlocal_content(wire(box, wiring)).q
    return float(after - before)
