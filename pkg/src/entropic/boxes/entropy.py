"""Entropy vectors of boxes."""

from ..entropy import EntropyVector, shannon_entropy
from .model import MarginalModel


def entropy_vector(box: MarginalModel) -> EntropyVector:
    """Joint Shannon entropy in bits of every (nonempty) context subset."""
    values = {}
    for context in box.scenario.sorted_contexts():
        table = box.marginal(context)
        values[context] = shannon_entropy(table.astype(float))
    return EntropyVector(values)
