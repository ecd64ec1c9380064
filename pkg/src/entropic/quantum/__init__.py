"""Quantum boxes and numerical optimization of entropic violations."""

from .boxes import (
    BELL_BASIS,
    bilocal_quantum_box,
    chained_quantum_box,
    chsh_quantum_box,
    horodecki_chsh,
    klyachko_quantum_box,
    klyachko_state,
    klyachko_vectors,
    source_state,
    tsirelson_angles,
    two_qubit_state,
)
from .expansion import (
    ExpansionCheck,
    leading_entropies,
    leading_order,
    leading_tables,
    smallphi_expansion_check,
    symmetric_lhs,
)
from .linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Observable,
    StateVector,
    bloch_observable,
    bloch_vectors,
    local_distribution,
    plane_observable,
)
from .optimize import (
    KLYACHKO_BOUNDS,
    OptimizationReport,
    OptimizationTarget,
    ThresholdResult,
    chained_objective,
    chsh_entropic_objective,
    klyachko_objective,
    maximize,
    optimization_target,
    optimize_target,
    two_detector_objective,
    two_detector_threshold,
)

__all__ = [
    "BELL_BASIS",
    "bilocal_quantum_box",
    "chained_quantum_box",
    "chsh_quantum_box",
    "horodecki_chsh",
    "klyachko_quantum_box",
    "klyachko_state",
    "klyachko_vectors",
    "source_state",
    "tsirelson_angles",
    "two_qubit_state",
    "ExpansionCheck",
    "leading_entropies",
    "leading_order",
    "leading_tables",
    "smallphi_expansion_check",
    "symmetric_lhs",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "Observable",
    "StateVector",
    "bloch_observable",
    "bloch_vectors",
    "local_distribution",
    "plane_observable",
    "KLYACHKO_BOUNDS",
    "OptimizationReport",
    "OptimizationTarget",
    "ThresholdResult",
    "chained_objective",
    "chsh_entropic_objective",
    "klyachko_objective",
    "maximize",
    "optimization_target",
    "optimize_target",
    "two_detector_objective",
    "two_detector_threshold",
]
