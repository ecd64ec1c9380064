"""Symmetry groups of marginal scenarios by brute force over permutations."""

import logging
from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Iterable, Mapping

from ..exceptions import SizeLimitError
from .scenario import MarginalScenario, Subset

logger = logging.getLogger(__name__)

Permutation = Mapping[str, str]

MAX_BRUTE_FORCE_OBSERVABLES = 8


def apply_permutation(subset: Iterable[str], permutation: Permutation) -> Subset:
    """Image of an observable set under a permutation."""
    return frozenset(permutation[name] for name in subset)


def compose(first: Permutation, second: Permutation) -> dict[str, str]:
    """Apply `first`, then `second`."""
    return {name: second[first[name]] for name in first}


def inverse(permutation: Permutation) -> dict[str, str]:
    return {image: name for name, image in permutation.items()}


@dataclass(frozen=True)
class SymmetryGroup:
    """Observable permutations preserving a scenario's structure; identity first."""

    observables: tuple[str, ...]
    images: tuple[tuple[str, ...], ...]

    @property
    def elements(self) -> list[dict[str, str]]:
        return [dict(zip(self.observables, image)) for image in self.images]

    @property
    def order(self) -> int:
        return len(self.images)

    def __len__(self) -> int:
        return len(self.images)

    def __iter__(self):
        return iter(self.elements)

    def is_closed(self) -> bool:
        """Closure under composition and inverse."""
        present = set(self.images)
        elements = self.elements
        for a in elements:
            if tuple(inverse(a)[name] for name in self.observables) not in present:
                return False
            for b in elements:
                product_ = compose(a, b)
                if tuple(product_[name] for name in self.observables) not in present:
                    return False
        return True


def _preserves(scenario: MarginalScenario, permutation: Permutation) -> bool:
    for name in scenario.observables:
        if scenario.cardinalities[name] != scenario.cardinalities[permutation[name]]:
            return False
    for context in scenario.maximal_contexts:
        if apply_permutation(context, permutation) not in scenario.contexts:
            return False
    pairs = {frozenset(pair) for pair in scenario.independences}
    for s, t in scenario.independences:
        image = frozenset((apply_permutation(s, permutation), apply_permutation(t, permutation)))
        if image not in pairs:
            return False
    return True


def symmetries(scenario: MarginalScenario) -> SymmetryGroup:
    """
    The full group of observable permutations mapping contexts to contexts,
    preserving outcome cardinalities and the set of independence pairs.
    """
    if scenario.n > MAX_BRUTE_FORCE_OBSERVABLES:
        raise SizeLimitError(
            "symmetry search", factorial(scenario.n), factorial(MAX_BRUTE_FORCE_OBSERVABLES)
        )
    observables = scenario.observables
    images = []
    for image in permutations(observables):
        permutation = dict(zip(observables, image))
        if _preserves(scenario, permutation):
            images.append(image)
    # permutations() yields the identity first
    group = SymmetryGroup(observables, tuple(images))
    logger.debug("scenario %s has a symmetry group of order %d", scenario.name or "?", group.order)
    return group
