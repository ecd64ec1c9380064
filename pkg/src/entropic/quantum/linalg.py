"""Small dense complex linear algebra: states, observables and Born-rule tables."""

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from ..config import config
from ..exceptions import ParameterError

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

UNIT_TOLERANCE = 1e-12


@dataclass
class StateVector:
    """A pure state; `dims` gives the tensor factors (qubits, qutrits)."""

    amplitudes: np.ndarray
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).ravel()
        if not self.dims:
            self.dims = (self.amplitudes.size,)
        if int(np.prod(self.dims)) != self.amplitudes.size:
            raise ParameterError(
                f"state of dimension {self.amplitudes.size} does not factor as {self.dims}"
            )
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > UNIT_TOLERANCE:
            raise ParameterError(f"state vector has norm {norm:.15g}, expected 1")

    @classmethod
    def normalized(cls, amplitudes: Sequence[complex], dims: tuple[int, ...] = ()) -> "StateVector":
        vector = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise ParameterError("cannot normalize the zero vector")
        return cls(vector / norm, dims)

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def expectation(self, operator: np.ndarray) -> complex:
        return complex(np.vdot(self.amplitudes, operator @ self.amplitudes))

    def overlap(self, vector: np.ndarray) -> float:
        """|<v|psi>|^2 for a (normalized) vector v."""
        return float(abs(np.vdot(vector, self.amplitudes)) ** 2)


@dataclass
class Observable:
    """
    A projective measurement; outcome k has projector `projectors[k]`.

    Two-outcome observables built from a ±1 matrix M use outcome 0 for the
    eigenvalue +1 and outcome 1 for -1.
    """

    projectors: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        self.projectors = [np.asarray(p, dtype=complex) for p in self.projectors]

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "Observable":
        matrix = np.asarray(matrix, dtype=complex)
        identity = np.eye(matrix.shape[0], dtype=complex)
        return cls([(identity + matrix) / 2, (identity - matrix) / 2])

    @classmethod
    def from_basis(cls, vectors: Sequence[np.ndarray]) -> "Observable":
        """Rank-one projectors onto an orthonormal basis."""
        return cls([np.outer(v, np.conj(v)) for v in vectors])

    @property
    def outcomes(self) -> int:
        return len(self.projectors)

    @property
    def matrix(self) -> np.ndarray:
        """sum_k (-1)^k P_k; the ±1 matrix for two outcomes."""
        return sum(((-1) ** k) * p for k, p in enumerate(self.projectors))

    def is_valid(self, tolerance: float = UNIT_TOLERANCE) -> bool:
        """Hermitian, idempotent, mutually orthogonal projectors summing to one."""
        if not self.projectors:
            return False
        d = self.projectors[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for i, p in enumerate(self.projectors):
            if np.max(np.abs(p - p.conj().T)) > tolerance:
                return False
            if np.max(np.abs(p @ p - p)) > tolerance:
                return False
            for q in self.projectors[i + 1:]:
                if np.max(np.abs(p @ q)) > tolerance:
                    return False
            total += p
        return bool(np.max(np.abs(total - np.eye(d))) <= tolerance)


def plane_observable(theta: float) -> Observable:
    """sin(theta) sigma_y + cos(theta) sigma_z: a measurement in the Y-Z plane."""
    return Observable.from_matrix(np.sin(theta) * PAULI_Y + np.cos(theta) * PAULI_Z)


def bloch_vectors(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal qubit basis along the Bloch direction (theta, phi)."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    up = np.array([c, np.exp(1j * phi) * s])
    down = np.array([-np.exp(-1j * phi) * s, c])
    return up, down


def bloch_observable(theta: float, phi: float) -> Observable:
    """Measurement along an arbitrary Bloch direction; outcome 0 is the +1 eigenvector."""
    return Observable.from_basis(bloch_vectors(theta, phi))


def local_distribution(state: StateVector, observables: Sequence[Observable]) -> np.ndarray:
    """
    Born-rule table for one local measurement per tensor factor.

    Returns an array indexed by the outcomes in factor order.
    """
    if len(observables) != len(state.dims):
        raise ParameterError(
            f"need one observable per tensor factor ({len(state.dims)}), got {len(observables)}"
        )
    shape = tuple(o.outcomes for o in observables)
    table = np.zeros(shape)
    psi = state.tensor()
    for outcome in product(*(range(k) for k in shape)):
        projected = psi
        for axis, (observable, k) in enumerate(zip(observables, outcome)):
            projected = np.moveaxis(
                np.tensordot(observable.projectors[k], projected, axes=([1], [axis])), 0, axis
            )
        table[outcome] = np.vdot(psi, projected).real
    return clean_probabilities(table)


def clean_probabilities(table: np.ndarray) -> np.ndarray:
    """Clip round-off negatives; anything below -quantum tolerance is an error."""
    table = np.asarray(table, dtype=float)
    low = float(table.min()) if table.size else 0.0
    if low < -config.tolerances.quantum:
        raise ParameterError(f"negative Born probability {low:.3g}")
    return np.clip(table, 0.0, None)
