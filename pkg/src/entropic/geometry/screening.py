"""Floating-point LP screening with HiGHS, used to avoid exact LPs where possible."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from .linear import LinearExpr

logger = logging.getLogger(__name__)


@dataclass
class ScreenResult:
    """Float LP outcome for one candidate inequality."""

    status: str  # "bounded", "unbounded", "infeasible", "failed"
    value: Optional[float] = None
    ineq_multipliers: Optional[np.ndarray] = None
    eq_multipliers: Optional[np.ndarray] = None


class DenseSystem:
    """Dense float copy of a set of inequalities and equations for HiGHS."""

    def __init__(
        self,
        coordinates: Sequence[str],
        inequalities: Sequence[LinearExpr],
        equations: Sequence[LinearExpr],
    ):
        self.coordinates = tuple(coordinates)
        index = {name: j for j, name in enumerate(self.coordinates)}
        n = len(self.coordinates)
        self.a = np.zeros((len(inequalities), n))
        self.c = np.zeros(len(inequalities))
        for i, expr in enumerate(inequalities):
            for name, value in expr.coeffs.items():
                self.a[i, index[name]] = float(value)
            self.c[i] = float(expr.constant)
        self.e = np.zeros((len(equations), n))
        self.d = np.zeros(len(equations))
        for i, expr in enumerate(equations):
            for name, value in expr.coeffs.items():
                self.e[i, index[name]] = float(value)
            self.d[i] = float(expr.constant)

    def maximize_row(self, k: int, active: Sequence[int], bound: float = 1.0) -> ScreenResult:
        """
        Maximize row k over the other active rows plus `row_k(x) <= bound`.

        The bounding row keeps the LP finite; a maximum below `bound` means the
        bound is slack and the dual multipliers certify the others imply it.
        """
        others = [i for i in active if i != k]
        n = self.a.shape[1]
        a_ub = np.vstack([self.a[others], self.a[k:k + 1]]) if others else self.a[k:k + 1]
        b_ub = np.concatenate([-self.c[others], [bound - self.c[k]]])
        kwargs = {}
        if len(self.d):
            kwargs = {"A_eq": self.e, "b_eq": -self.d}
        try:
            res = linprog(
                -self.a[k],
                A_ub=a_ub,
                b_ub=b_ub,
                bounds=[(None, None)] * n,
                method="highs",
                **kwargs,
            )
        except ValueError as exc:
            logger.debug("HiGHS rejected screening LP for row %d: %s", k, exc)
            return ScreenResult("failed")
        if res.status == 2:
            return ScreenResult("infeasible")
        if res.status == 3:
            return ScreenResult("unbounded")
        if res.status != 0:
            return ScreenResult("failed")
        value = -res.fun + self.c[k]
        multipliers = np.zeros(len(self.c))
        marginals = -np.asarray(res.ineqlin.marginals)
        for pos, i in enumerate(others):
            multipliers[i] = marginals[pos]
        eq = -np.asarray(res.eqlin.marginals) if len(self.d) else np.zeros(0)
        return ScreenResult("bounded", float(value), multipliers, eq)
