"""Quantum marginal models: CHSH, chained, Klyachko qutrit and two-source bilocal boxes."""

import logging
from typing import Sequence

import numpy as np

from ..boxes import MarginalModel
from ..exceptions import ParameterError
from ..scenarios import bilocality, chained, klyachko
from .linalg import (
    Observable,
    StateVector,
    bloch_observable,
    bloch_vectors,
    clean_probabilities,
    local_distribution,
    plane_observable,
)

logger = logging.getLogger(__name__)

HALF_PI = np.pi / 2

# Bell basis on (B1, B2) in source-local bases, b = 0..3
BELL_BASIS = np.array([
    [[1, 0], [0, 1]],
    [[1, 0], [0, -1]],
    [[0, 1], [1, 0]],
    [[0, 1], [-1, 0]],
], dtype=complex) / np.sqrt(2)


def two_qubit_state(alpha: float) -> StateVector:
    """cos(alpha)|00> + sin(alpha)|11>."""
    if not 0 < alpha < HALF_PI:
        raise ParameterError(f"alpha must lie in (0, pi/2), got {alpha}")
    return StateVector(np.array([np.cos(alpha), 0, 0, np.sin(alpha)]), (2, 2))


def _observables(angles: Sequence[float], count: int, full: bool) -> list[Observable]:
    """Single-plane observables from `count` angles, or Bloch ones from (theta, phi) pairs."""
    angles = [float(a) for a in angles]
    if full:
        if len(angles) != 2 * count:
            raise ParameterError(f"expected {2 * count} Bloch angles, got {len(angles)}")
        return [bloch_observable(angles[2 * i], angles[2 * i + 1]) for i in range(count)]
    if len(angles) != count:
        raise ParameterError(f"expected {count} measurement angles, got {len(angles)}")
    return [plane_observable(theta) for theta in angles]


def chained_quantum_box(
    alpha: float,
    k: int,
    angles: Sequence[float],
    full: bool = False,
    validate: bool = True,
) -> MarginalModel:
    """
    2k-cycle box from measurements on cos(alpha)|00> + sin(alpha)|11>.

    Args:
        alpha: State parameter in (0, pi/2)
        k: Settings per party (k >= 2)
        angles: Alice's k angles followed by Bob's k angles; with `full`,
            (theta, phi) Bloch pairs instead
        full: Use arbitrary Bloch directions instead of the Y-Z plane
        validate: Run the box checks (skipped inside optimizer loops)
    """
    scenario = chained(k)
    state = two_qubit_state(alpha)
    observables = _observables(angles, 2 * k, full)
    alice, bob = observables[:k], observables[k:]
    names_a, names_b = scenario.parties
    tables = {}
    for context in scenario.maximal_contexts:
        first, second = scenario.order(context)
        x = names_a.index(first)
        y = names_b.index(second)
        tables[(first, second)] = local_distribution(state, [alice[x], bob[y]])
    return MarginalModel.create(scenario, tables, validate=validate)


def chsh_quantum_box(
    alpha: float,
    angles: Sequence[float],
    full: bool = False,
    validate: bool = True,
) -> MarginalModel:
    """
    P(a,b|x,y) = <psi| (1 + (-1)^a A_x)/2 (x) (1 + (-1)^b B_y)/2 |psi>.

    `angles` are theta_A0, theta_A1, theta_B0, theta_B1 for the observables
    sin(theta) sigma_y + cos(theta) sigma_z.
    """
    return chained_quantum_box(alpha, 2, angles, full=full, validate=validate)


def tsirelson_angles() -> tuple[float, float, float, float]:
    """Y-Z plane settings reaching CHSH = 2 sqrt(2) on the maximally entangled state."""
    return (0.0, HALF_PI, -np.pi / 4, np.pi / 4)


def horodecki_chsh(alpha: float) -> float:
    """Largest CHSH value of cos(alpha)|00> + sin(alpha)|11>: 2 sqrt(1 + sin^2 2alpha)."""
    return float(2 * np.sqrt(1 + np.sin(2 * alpha) ** 2))


def klyachko_vectors(theta: float, phi: float) -> list[np.ndarray]:
    """
    The five real unit vectors with <v_i|v_i+1> = 0 (cyclically).

    Raises:
        ParameterError: degenerate normalization of v3
    """
    norm = np.sqrt(np.sin(theta) ** 2 + np.cos(theta) ** 2 * np.sin(phi) ** 2)
    if norm < 1e-14:
        raise ParameterError(f"degenerate Klyachko vectors at theta={theta}, phi={phi}")
    return [
        np.array([0.0, 0.0, 1.0]),
        np.array([np.sin(theta), np.cos(theta), 0.0]),
        np.array([
            np.cos(theta) * np.sin(phi),
            -np.sin(theta) * np.sin(phi),
            np.sin(theta) * np.cos(phi),
        ]) / norm,
        np.array([0.0, np.cos(phi), np.sin(phi)]),
        np.array([1.0, 0.0, 0.0]),
    ]


def klyachko_state(alpha: float) -> StateVector:
    """(sin alpha, cos alpha, sin alpha) / sqrt(1 + sin^2 alpha)."""
    return StateVector.normalized([np.sin(alpha), np.cos(alpha), np.sin(alpha)])


def _orthogonal_pair_table(state: StateVector, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """
    Joint table of X_i = 2|v_i><v_i| - 1 and X_j for orthogonal real v_i, v_j.

    Outcome 1 is the click on |v>; both clicking never occurs. P(0,0) is the
    weight on the third axis v_i x v_j, which keeps tiny entries accurate.
    """
    third = np.cross(first, second)
    table = np.zeros((2, 2))
    table[1, 0] = state.overlap(first)
    table[0, 1] = state.overlap(second)
    table[0, 0] = state.overlap(third)
    return clean_probabilities(table)


def klyachko_quantum_box(
    alpha: float,
    theta: float,
    phi: float,
    validate: bool = True,
) -> MarginalModel:
    """
    5-cycle box on the qutrit state (sin a, cos a, sin a)/sqrt(1 + sin^2 a)
    with X_i = 2|v_i><v_i| - 1.
    """
    scenario = klyachko()
    state = klyachko_state(alpha)
    vectors = dict(zip(scenario.observables, klyachko_vectors(theta, phi)))
    tables = {}
    for context in scenario.maximal_contexts:
        first, second = scenario.order(context)
        tables[(first, second)] = _orthogonal_pair_table(state, vectors[first], vectors[second])
    return MarginalModel.create(scenario, tables, validate=validate)


def source_state(theta: float, phi: float) -> np.ndarray:
    """cos(theta)|00> + sin(theta) e^{i phi}|11> as a 2x2 amplitude matrix."""
    return np.array([[np.cos(theta), 0], [0, np.sin(theta) * np.exp(1j * phi)]])


def bilocal_quantum_box(
    theta1: float,
    phi1: float,
    theta2: float,
    phi2: float,
    a_angles: Sequence[Sequence[float]],
    c_angles: Sequence[Sequence[float]],
    validate: bool = True,
) -> MarginalModel:
    """
    Entanglement-swapping box: sources on (A, B1) and (B2, C), B measures
    (B1, B2) in the Bell basis (4 outcomes), A and C measure qubit directions
    given as two (theta, phi) Bloch pairs each.
    """
    if len(a_angles) != 2 or len(c_angles) != 2:
        raise ParameterError("A and C need two (theta, phi) settings each")
    left = source_state(theta1, phi1)
    right = source_state(theta2, phi2)
    scenario = bilocality(4)
    tables = {}
    for x, (ta, pa) in enumerate(a_angles):
        alice = np.conj(np.array(bloch_vectors(ta, pa)))
        for z, (tc, pc) in enumerate(c_angles):
            charlie = np.conj(np.array(bloch_vectors(tc, pc)))
            amplitudes = np.einsum(
                "ai,bjk,cl,ij,kl->abc", alice, np.conj(BELL_BASIS), charlie, left, right
            )
            tables[(f"A{x}", "B", f"C{z}")] = clean_probabilities(np.abs(amplitudes) ** 2)
    return MarginalModel.create(scenario, tables, validate=validate)
