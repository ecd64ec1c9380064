"""Derivative-free maximization of entropic violations with seeded restarts."""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from ..boxes import (
    chsh_entropic,
    entropy_vector,
    ncycle_entropic,
    polygon_inequality,
    two_detector_entropies,
)
from ..config import config
from ..entropy import EntropyVector, evaluate
from ..exceptions import ParameterError
from .boxes import chained_quantum_box, chsh_quantum_box, klyachko_quantum_box

logger = logging.getLogger(__name__)

Bounds = Sequence[tuple[float, float]]
Objective = Callable[[np.ndarray], float]

EDGE = 1e-6
ALPHA_BOUNDS = (EDGE, np.pi / 2 - EDGE)
ANGLE_BOUNDS = (-np.pi, np.pi)


@dataclass
class OptimizationReport:
    """Best point found over all restarts; `best_value` is re-evaluated at `best_params`."""

    target: str
    best_params: list[float]
    best_value: float
    evaluations: int
    restarts: int
    seed: int
    parameter_names: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "best_params": [float(p) for p in self.best_params],
            "parameter_names": list(self.parameter_names),
            "best_value": float(self.best_value),
            "evaluations": self.evaluations,
            "restarts": self.restarts,
            "seed": self.seed,
        }


@dataclass
class OptimizationTarget:
    """A named objective over a box of parameters."""

    name: str
    objective: Objective
    bounds: list[tuple[float, float]]
    parameter_names: list[str]
    description: str = ""


def _clip(point: np.ndarray, bounds: Bounds) -> np.ndarray:
    low = np.array([b[0] for b in bounds])
    high = np.array([b[1] for b in bounds])
    return np.clip(point, low, high)


def _restart(
    objective: Objective,
    bounds: Bounds,
    seed: np.random.SeedSequence,
    xatol: float,
    fatol: float,
    max_evaluations: int,
) -> tuple[np.ndarray, float, int]:
    rng = np.random.default_rng(seed)
    start = np.array([rng.uniform(low, high) for low, high in bounds])

    def negated(point: np.ndarray) -> float:
        value = objective(_clip(point, bounds))
        return -value if np.isfinite(value) else np.inf

    result = minimize(
        negated,
        start,
        method="Nelder-Mead",
        options={"xatol": xatol, "fatol": fatol, "maxfev": max_evaluations},
    )
    best = _clip(result.x, bounds)
    return best, float(objective(best)), int(result.nfev)


def maximize(
    objective: Objective,
    bounds: Bounds,
    *,
    restarts: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    target: str = "",
    parameter_names: Sequence[str] = (),
) -> OptimizationReport:
    """
    Nelder-Mead from uniformly random starts inside `bounds`.

    Each restart draws from its own spawned seed, so the report depends only
    on `seed` and `restarts`, never on the worker count.

    Args:
        objective: Function of a parameter vector, evaluated inside bounds
        bounds: Finite (low, high) per parameter
        restarts: Number of random starts (config default 50)
        seed: Root seed (config default 0)
        workers: Parallel restarts
    """
    if any(not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi) for lo, hi in bounds):
        raise ParameterError(f"bounds must be finite intervals, got {list(bounds)}")
    settings = config.optimizer
    restarts = settings.restarts if restarts is None else restarts
    seed = settings.seed if seed is None else seed
    workers = workers or settings.workers
    if restarts < 1:
        raise ParameterError(f"restarts must be >= 1, got {restarts}")

    started = time.monotonic()
    seeds = np.random.SeedSequence(seed).spawn(restarts)

    def run(child: np.random.SeedSequence):
        return _restart(
            objective, bounds, child, settings.xatol, settings.fatol, settings.max_evaluations
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, seeds))
    else:
        outcomes = [run(child) for child in seeds]

    best_index = max(range(restarts), key=lambda i: (outcomes[i][1], -i))
    best_params, best_value, _ = outcomes[best_index]
    evaluations = sum(o[2] for o in outcomes)
    logger.info(
        "%s: best %.6f after %d restarts (%d evaluations)",
        target or "objective", best_value, restarts, evaluations,
    )
    return OptimizationReport(
        target=target,
        best_params=[float(p) for p in best_params],
        best_value=best_value,
        evaluations=evaluations,
        restarts=restarts,
        seed=seed,
        parameter_names=list(parameter_names),
        elapsed=time.monotonic() - started,
    )


def chsh_entropic_objective(full: bool = False) -> Objective:
    def objective(params: np.ndarray) -> float:
        box = chsh_quantum_box(params[0], params[1:], full=full, validate=False)
        return chsh_entropic(box)
    return objective


def chained_objective(k: int) -> Objective:
    """The n-cycle inequality broken at (A_k-1, B_k-1); k = 2 is CHSH_E."""
    def objective(params: np.ndarray) -> float:
        box = chained_quantum_box(params[0], k, params[1:], validate=False)
        return ncycle_entropic(box, 2 * k - 1)
    return objective


def klyachko_entropies(params: np.ndarray) -> EntropyVector:
    alpha, theta, phi = params
    return entropy_vector(klyachko_quantum_box(alpha, theta, phi, validate=False))


def klyachko_objective(params: np.ndarray) -> float:
    """Largest of the five cyclic entropic Klyachko expressions."""
    entropies = klyachko_entropies(params)
    order = tuple(f"X{i}" for i in range(1, 6))
    return max(evaluate(polygon_inequality(order, i), entropies) for i in range(1, 6))


def two_detector_objective(eta: float) -> Objective:
    """Entropic Klyachko value with two independent detectors of efficiency eta."""
    order = tuple(f"X{i}" for i in range(1, 6))
    inequalities = [polygon_inequality(order, i) for i in range(1, 6)]

    def objective(params: np.ndarray) -> float:
        entropies = two_detector_entropies(klyachko_entropies(params), eta)
        return max(evaluate(ineq, entropies) for ineq in inequalities)
    return objective


KLYACHKO_BOUNDS = [ALPHA_BOUNDS, (EDGE, np.pi / 2), (EDGE, np.pi / 2)]


def optimization_target(name: str) -> OptimizationTarget:
    """
    Resolve `chsh_e`, `chsh_e_full`, `klyachko_e` or `chained:k`.

    Raises:
        ParameterError: unknown target
    """
    key, _, argument = name.strip().lower().partition(":")
    if key == "chsh_e" and not argument:
        return OptimizationTarget(
            "chsh_e", chsh_entropic_objective(), [ALPHA_BOUNDS] + [ANGLE_BOUNDS] * 4,
            ["alpha", "theta_A0", "theta_A1", "theta_B0", "theta_B1"],
            "CHSH_E over the state and Y-Z plane settings",
        )
    if key == "chsh_e_full" and not argument:
        names = [f"{angle}_{obs}" for obs in ("A0", "A1", "B0", "B1") for angle in ("theta", "phi")]
        return OptimizationTarget(
            "chsh_e_full", chsh_entropic_objective(full=True),
            [ALPHA_BOUNDS] + [(0.0, np.pi), ANGLE_BOUNDS] * 4,
            ["alpha"] + names,
            "CHSH_E over the state and arbitrary Bloch directions",
        )
    if key == "klyachko_e" and not argument:
        return OptimizationTarget(
            "klyachko_e", klyachko_objective, KLYACHKO_BOUNDS, ["alpha", "theta", "phi"],
            "entropic Klyachko over the qutrit family",
        )
    if key == "chained":
        try:
            k = int(argument)
        except ValueError as exc:
            raise ParameterError(f"bad chained target {name!r}") from exc
        if k < 2:
            raise ParameterError(f"chained targets need k >= 2, got {k}")
        names = [f"theta_A{i}" for i in range(k)] + [f"theta_B{i}" for i in range(k)]
        return OptimizationTarget(
            f"chained:{k}", chained_objective(k), [ALPHA_BOUNDS] + [ANGLE_BOUNDS] * (2 * k),
            ["alpha"] + names,
            f"entropic {2 * k}-cycle inequality on the chained scenario",
        )
    raise ParameterError(
        f"unknown optimization target {name!r}; known: chsh_e, chsh_e_full, klyachko_e, chained:k"
    )


def optimize_target(
    name: str,
    *,
    restarts: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> OptimizationReport:
    target = optimization_target(name)
    return maximize(
        target.objective,
        target.bounds,
        restarts=restarts,
        seed=seed,
        workers=workers,
        target=target.name,
        parameter_names=target.parameter_names,
    )


@dataclass
class ThresholdResult:
    threshold: float
    bracket: tuple[float, float]
    steps: list[tuple[float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "bracket": list(self.bracket),
            "steps": [{"eta": eta, "violation": value} for eta, value in self.steps],
        }


def two_detector_threshold(
    bracket: tuple[float, float] = (0.98, 1.0),
    tolerance: float = 1e-4,
    *,
    restarts: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> ThresholdResult:
    """
    Bisect for the smallest efficiency with an entropic Klyachko violation.

    Each midpoint is optimized over (alpha, theta, phi); the upper end of
    the bracket must violate and the lower end must not.

    Raises:
        ParameterError: the bracket does not straddle the threshold
    """
    low, high = bracket
    if not 0 < low < high <= 1:
        raise ParameterError(f"bracket must satisfy 0 < low < high <= 1, got {bracket}")

    def violation(eta: float) -> float:
        report = maximize(
            two_detector_objective(eta), KLYACHKO_BOUNDS,
            restarts=restarts, seed=seed, workers=workers, target=f"eta={eta:.6f}",
        )
        return report.best_value

    steps = [(low, violation(low)), (high, violation(high))]
    if steps[0][1] > 0 or steps[1][1] <= 0:
        raise ParameterError(
            f"no sign change on [{low}, {high}]: violations {steps[0][1]:.3g}, {steps[1][1]:.3g}"
        )
    while high - low > tolerance:
        middle = (low + high) / 2
        value = violation(middle)
        steps.append((middle, value))
        if value > 0:
            high = middle
        else:
            low = middle
    threshold = (low + high) / 2
    logger.info("two-detector threshold %.5f after %d evaluations", threshold, len(steps))
    return ThresholdResult(threshold, bracket, steps)
