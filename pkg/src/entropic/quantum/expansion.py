"""Small-angle analysis of the Klyachko entropic violation."""

from dataclasses import dataclass

import numpy as np

from ..boxes import entropy_vector
from ..entropy import EntropyVector, shannon_entropy
from ..exceptions import ParameterError
from .boxes import klyachko_quantum_box


def symmetric_lhs(entropies: EntropyVector) -> float:
    """
    H(X1X5) + 2H(X2) + H(X3) - 2H(X1X2) - 2H(X2X3).

    On the symmetric family theta = phi this equals the entropic Klyachko
    left-hand side with the cycle broken at (X1, X5).
    """
    return (
        entropies["X1,X5"] + 2 * entropies["X2"] + entropies["X3"]
        - 2 * entropies["X1,X2"] - 2 * entropies["X2,X3"]
    )


def leading_order(phi: float) -> float:
    """-(5/2) phi^2 log2(phi^2)."""
    return float(-2.5 * phi * phi * np.log2(phi * phi))


def leading_tables(phi: float) -> dict[tuple[str, str], np.ndarray]:
    """
    Joint tables to second order in phi at theta = phi, alpha = 2 phi.

    Outcome 1 is the click on |v_i>; the (1, 1) entry is zero.
    """
    p = phi * phi
    return {
        ("X1", "X5"): np.array([[1 - 8 * p, 4 * p], [4 * p, 0.0]]),
        ("X1", "X2"): np.array([[p, 1 - 5 * p], [4 * p, 0.0]]),
        ("X2", "X3"): np.array([[0.5 * p, 4.5 * p], [1 - 5 * p, 0.0]]),
    }


def leading_entropies(phi: float) -> EntropyVector:
    """Entropies entering `symmetric_lhs`, computed from `leading_tables`."""
    tables = leading_tables(phi)
    x2 = tables[("X1", "X2")].sum(axis=0)
    x3 = tables[("X2", "X3")].sum(axis=0)
    return EntropyVector.from_dict({
        "X1,X5": shannon_entropy(tables[("X1", "X5")]),
        "X1,X2": shannon_entropy(tables[("X1", "X2")]),
        "X2,X3": shannon_entropy(tables[("X2", "X3")]),
        "X2": shannon_entropy(x2),
        "X3": shannon_entropy(x3),
    })


@dataclass
class ExpansionCheck:
    """
    Attributes:
        phi: Expansion parameter
        lhs: Exact symmetric left-hand side on the quantum box
        ratio: lhs over the leading term -(5/2) phi^2 log2 phi^2
        corrected_ratio: lhs over the same expression evaluated on the
            second-order tables (includes the O(phi^2) non-logarithmic part)
        table_error: Largest deviation of the quantum tables from the
            second-order tables
    """
    phi: float
    lhs: float
    ratio: float
    corrected_ratio: float
    table_error: float

    def to_dict(self) -> dict:
        return {
            "phi": self.phi,
            "lhs": self.lhs,
            "ratio": self.ratio,
            "corrected_ratio": self.corrected_ratio,
            "table_error": self.table_error,
        }


def smallphi_expansion_check(phi: float) -> ExpansionCheck:
    """
    Compare the Klyachko box at theta = phi, alpha = 2 phi with its expansion.

    The plain ratio tends to 1 only like 1 - 4.34 / log2(1/phi^2); the
    corrected ratio is 1 + O(phi).

    Raises:
        ParameterError: phi outside (0, 0.1)
    """
    if not 0 < phi < 0.1:
        raise ParameterError(f"phi must lie in (0, 0.1), got {phi}")
    box = klyachko_quantum_box(2 * phi, phi, phi)
    lhs = symmetric_lhs(entropy_vector(box))
    error = max(
        float(np.max(np.abs(box.table(context).astype(float) - table)))
        for context, table in leading_tables(phi).items()
    )
    return ExpansionCheck(
        phi=phi,
        lhs=lhs,
        ratio=lhs / leading_order(phi),
        corrected_ratio=lhs / symmetric_lhs(leading_entropies(phi)),
        table_error=error,
    )
