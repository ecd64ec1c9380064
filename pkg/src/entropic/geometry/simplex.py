"""Exact two-phase simplex over rationals with Bland's anti-cycling rule."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from ..exceptions import CoordinateError
from .linear import LinearExpr, LinearSystem

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


class LPStatus(Enum):
    """Outcome of a linear program."""

    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass
class LPResult:
    """Result of an exact LP: status, optimal value and a witness point."""

    status: LPStatus
    value: Optional[Fraction] = None
    witness: dict[str, Fraction] = field(default_factory=dict)
    pivots: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status == LPStatus.OPTIMAL

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "value": None if self.value is None else str(self.value),
            "witness": {k: str(v) for k, v in self.witness.items()},
            "pivots": self.pivots,
        }


@dataclass
class StandardFormResult:
    status: LPStatus
    value: Optional[Fraction] = None
    solution: list[Fraction] = field(default_factory=list)
    pivots: int = 0


class _Tableau:
    """Dense rational tableau with an explicit basis."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.rows = rows
        self.basis = basis
        self.pivots = 0

    @property
    def width(self) -> int:
        return len(self.rows[0]) - 1 if self.rows else 0

    def pivot(self, r: int, col: int, objective: list[Fraction]):
        row = self.rows[r]
        lead = row[col]
        if lead != ONE:
            row = [v / lead for v in row]
            self.rows[r] = row
        support = [j for j, v in enumerate(row) if v != 0]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[col]
            if f != 0:
                for j in support:
                    other[j] -= f * row[j]
        f = objective[col]
        if f != 0:
            for j in support:
                objective[j] -= f * row[j]
        self.basis[r] = col
        self.pivots += 1

    def reduced_costs(self, costs: Sequence[Fraction]) -> list[Fraction]:
        """Objective row `c_j - c_B B^-1 A_j`; last entry is minus the current value."""
        objective = list(costs) + [ZERO]
        for i, b in enumerate(self.basis):
            cb = costs[b] if b < len(costs) else ZERO
            if cb != 0:
                for j, v in enumerate(self.rows[i]):
                    if v != 0:
                        objective[j] -= cb * v
        return objective

    def run(self, objective: list[Fraction], allowed: int) -> LPStatus:
        """
        Maximize with Bland's rule: enter the lowest-index improving column,
        leave by minimum ratio with ties broken by lowest basic index.
        """
        while True:
            col = next((j for j in range(allowed) if objective[j] > 0), None)
            if col is None:
                return LPStatus.OPTIMAL
            best: Optional[int] = None
            best_ratio: Optional[Fraction] = None
            for i, row in enumerate(self.rows):
                if row[col] > 0:
                    ratio = row[-1] / row[col]
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[best])
                    ):
                        best, best_ratio = i, ratio
            if best is None:
                return LPStatus.UNBOUNDED
            self.pivot(best, col, objective)


def solve_standard_form(
    a_eq: list[list[Fraction]],
    b_eq: list[Fraction],
    costs: list[Fraction],
    initial_basis: Optional[list[Optional[int]]] = None,
) -> StandardFormResult:
    """
    Maximize `costs @ z` subject to `a_eq @ z = b_eq`, `z >= 0`, exactly.

    Args:
        a_eq: Constraint rows (all of equal length n)
        b_eq: Right-hand sides
        costs: Objective coefficients (length n)
        initial_basis: Optional per-row column that is already a unit column
            with a nonnegative right-hand side (slacks); other rows get
            artificial variables

    Returns:
        StandardFormResult with the optimal solution vector when optimal
    """
    n = len(costs)
    m = len(a_eq)
    rows: list[list[Fraction]] = []
    basis_hint: list[Optional[int]] = list(initial_basis or [None] * m)
    for i in range(m):
        row = [Fraction(v) for v in a_eq[i]]
        rhs = Fraction(b_eq[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
            basis_hint[i] = None
        rows.append(row + [rhs])

    artificial_rows = [i for i in range(m) if basis_hint[i] is None]
    width = n + len(artificial_rows)
    basis: list[int] = [0] * m
    for k, i in enumerate(artificial_rows):
        basis[i] = n + k
    for i in range(m):
        if basis_hint[i] is not None:
            basis[i] = basis_hint[i]
    tableau_rows = []
    for i, row in enumerate(rows):
        extra = [ZERO] * len(artificial_rows)
        if basis_hint[i] is None:
            extra[artificial_rows.index(i)] = ONE
        tableau_rows.append(row[:n] + extra + [row[n]])
    tableau = _Tableau(tableau_rows, basis)

    if artificial_rows:
        phase_one = [ZERO] * n + [-ONE] * len(artificial_rows)
        objective = tableau.reduced_costs(phase_one)
        tableau.run(objective, width)
        if -objective[-1] < 0:
            return StandardFormResult(LPStatus.INFEASIBLE, pivots=tableau.pivots)
        _drive_out_artificials(tableau, n)
        tableau.rows = [row[:n] + [row[-1]] for row in tableau.rows]

    objective = tableau.reduced_costs(costs)
    status = tableau.run(objective, n)
    if status == LPStatus.UNBOUNDED:
        return StandardFormResult(LPStatus.UNBOUNDED, pivots=tableau.pivots)
    solution = [ZERO] * n
    for i, b in enumerate(tableau.basis):
        solution[b] = tableau.rows[i][-1]
    value = sum((c * z for c, z in zip(costs, solution)), ZERO)
    return StandardFormResult(LPStatus.OPTIMAL, value, solution, tableau.pivots)


def _drive_out_artificials(tableau: _Tableau, n: int):
    """Pivot zero-level artificials out of the basis; drop rows that stay dependent."""
    dummy = [ZERO] * (tableau.width + 1)
    i = 0
    while i < len(tableau.rows):
        if tableau.basis[i] < n:
            i += 1
            continue
        col = next((j for j in range(n) if tableau.rows[i][j] != 0), None)
        if col is None:
            del tableau.rows[i]
            del tableau.basis[i]
            continue
        tableau.pivot(i, col, dummy)
        i += 1


def lp_solve(objective: LinearExpr, direction: str, system: LinearSystem) -> LPResult:
    """
    Optimize an affine objective over a LinearSystem exactly.

    Coordinates are free; each is split as x = u - v with u, v >= 0.

    Args:
        objective: Affine expression to optimize
        direction: "max" or "min"
        system: Constraints (inequalities expr <= 0, equations expr = 0)

    Returns:
        LPResult with status, exact optimal value and a witness point
    """
    if direction not in ("max", "min"):
        raise ValueError(f"direction must be 'max' or 'min', got {direction!r}")
    unknown = objective.variables - set(system.coordinates)
    if unknown:
        raise CoordinateError(f"objective uses undeclared coordinates: {sorted(unknown)}")

    coords = system.coordinates
    index = {name: j for j, name in enumerate(coords)}
    n = len(coords)
    m_ineq = len(system.inequalities)
    width = 2 * n + m_ineq

    a_eq: list[list[Fraction]] = []
    b_eq: list[Fraction] = []
    basis: list[Optional[int]] = []
    for k, expr in enumerate(system.inequalities):
        row = [ZERO] * width
        for name, c in expr.coeffs.items():
            row[index[name]] = c
            row[n + index[name]] = -c
        row[2 * n + k] = ONE
        a_eq.append(row)
        b_eq.append(-expr.constant)
        basis.append(2 * n + k)
    for expr in system.equations:
        row = [ZERO] * width
        for name, c in expr.coeffs.items():
            row[index[name]] = c
            row[n + index[name]] = -c
        a_eq.append(row)
        b_eq.append(-expr.constant)
        basis.append(None)

    sign = ONE if direction == "max" else -ONE
    costs = [ZERO] * width
    for name, c in objective.coeffs.items():
        costs[index[name]] = sign * c
        costs[n + index[name]] = -sign * c

    result = solve_standard_form(a_eq, b_eq, costs, basis)
    logger.debug(
        "exact LP (%d coords, %d rows): %s after %d pivots",
        n, len(a_eq), result.status.value, result.pivots,
    )
    if result.status != LPStatus.OPTIMAL:
        return LPResult(result.status, pivots=result.pivots)
    witness = {name: result.solution[j] - result.solution[n + j] for j, name in enumerate(coords)}
    value = sign * result.value + objective.constant
    return LPResult(LPStatus.OPTIMAL, value, witness, result.pivots)
