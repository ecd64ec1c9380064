"""Entropy vectors, coordinate naming and Shannon entropy helpers."""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from ..config import config
from ..exceptions import CoordinateError

Subset = frozenset[str]
SubsetLike = Union[str, Iterable[str]]

SEPARATOR = ","


def as_subset(value: SubsetLike) -> Subset:
    """Accept "A0,B0", ("A0", "B0") or a frozenset."""
    if isinstance(value, str):
        return frozenset(part for part in value.split(SEPARATOR) if part)
    return frozenset(value)


def shannon_entropy(probabilities: Union[Sequence[float], np.ndarray]) -> float:
    """Shannon entropy in bits; probabilities below the zero threshold count as 0."""
    p = np.asarray(probabilities, dtype=float).ravel()
    p = p[p > config.tolerances.entropy_zero]
    if p.size == 0:
        return 0.0
    return float(-np.sum(p * np.log2(p)))


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2 (1-x)."""
    return shannon_entropy([x, 1.0 - x])


class EntropySpace:
    """
    Joint-entropy coordinates over an ordered observable list.

    Coordinates are nonempty subsets, ordered by size and then by observable
    positions; names join observables in order with commas ("A0,B0").
    """

    def __init__(self, observables: Sequence[str]):
        self.observables = tuple(observables)
        self._index = {name: i for i, name in enumerate(self.observables)}

    def sort_key(self, subset: Iterable[str]) -> tuple:
        positions = tuple(sorted(self._index[name] for name in subset))
        return (len(positions), positions)

    def ordered(self, subset: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(subset, key=self._index.__getitem__))

    def name(self, subset: Iterable[str]) -> str:
        members = tuple(subset)
        unknown = [m for m in members if m not in self._index]
        if unknown:
            raise CoordinateError(f"unknown observables {unknown}")
        return SEPARATOR.join(self.ordered(members))

    def subset(self, name: str) -> Subset:
        subset = as_subset(name)
        unknown = [m for m in subset if m not in self._index]
        if unknown or not subset:
            raise CoordinateError(f"bad coordinate name {name!r}")
        return subset

    def label(self, subset: Iterable[str]) -> str:
        """Display label such as H(A0B0)."""
        return "H(" + "".join(self.ordered(subset)) + ")"

    def sort(self, subsets: Iterable[Subset]) -> list[Subset]:
        return sorted(subsets, key=self.sort_key)

    @property
    def coordinates(self) -> list[Subset]:
        result = []
        for size in range(1, len(self.observables) + 1):
            result.extend(frozenset(c) for c in combinations(self.observables, size))
        return result

    def names(self, subsets: Iterable[Subset]) -> tuple[str, ...]:
        return tuple(self.name(s) for s in subsets)


@dataclass
class EntropyVector:
    """Joint Shannon entropies (bits) of context subsets."""

    values: dict[Subset, float] = field(default_factory=dict)

    def __getitem__(self, key: SubsetLike) -> float:
        subset = as_subset(key)
        if not subset:
            return 0.0
        if subset not in self.values:
            raise CoordinateError(f"no entropy for {sorted(subset)}")
        return self.values[subset]

    def __contains__(self, key: SubsetLike) -> bool:
        return as_subset(key) in self.values

    def H(self, *observables: str) -> float:
        return self[frozenset(observables)]

    def mutual_information(self, left: SubsetLike, right: SubsetLike) -> float:
        """I(S:T) = H(S) + H(T) - H(S u T)."""
        s, t = as_subset(left), as_subset(right)
        return self[s] + self[t] - self[s | t]

    def to_dict(self, space: EntropySpace) -> dict[str, float]:
        return {space.name(s): self.values[s] for s in space.sort(self.values)}

    @classmethod
    def from_dict(cls, data: Mapping[str, float]) -> "EntropyVector":
        return cls({as_subset(k): float(v) for k, v in data.items()})

    @classmethod
    def zeros(cls, subsets: Iterable[Subset]) -> "EntropyVector":
        return cls({frozenset(s): 0.0 for s in subsets})
