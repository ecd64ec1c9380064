"""Marginal scenarios: observables, down-closed contexts and independences."""

import json
import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

import yaml

from ..exceptions import ScenarioError

logger = logging.getLogger(__name__)

Subset = frozenset[str]
Independence = tuple[Subset, Subset]

PARTY_LETTERS = "ABCDEFGH"


def nonempty_subsets(items: Sequence[str]) -> list[tuple[str, ...]]:
    """All nonempty sub-tuples of `items`, by size then position."""
    result: list[tuple[str, ...]] = []
    for size in range(1, len(items) + 1):
        result.extend(combinations(items, size))
    return result


@dataclass(frozen=True)
class MarginalScenario:
    """
    A marginal scenario.

    Attributes:
        observables: Ordered observable names
        contexts: All nonempty jointly measurable subsets (down-closed)
        cardinalities: Number of outcomes per observable
        independences: Pairs of disjoint observable sets asserted independent
        name: Human-readable label
        parties: Observables grouped per party for Bell-type scenarios
    """
    observables: tuple[str, ...]
    contexts: frozenset[Subset]
    cardinalities: Mapping[str, int]
    independences: tuple[Independence, ...] = ()
    name: str = ""
    parties: Optional[tuple[tuple[str, ...], ...]] = None
    _index: Mapping[str, int] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.observables)})

    def __hash__(self) -> int:
        return hash((
            self.observables,
            self.contexts,
            tuple(sorted(self.cardinalities.items())),
            self.independences,
        ))

    @classmethod
    def create(
        cls,
        observables: Sequence[str],
        maximal_contexts: Iterable[Iterable[str]],
        cardinalities: Union[int, Mapping[str, int]] = 2,
        independences: Iterable[tuple[Iterable[str], Iterable[str]]] = (),
        name: str = "",
        parties: Optional[Sequence[Sequence[str]]] = None,
    ) -> "MarginalScenario":
        """
        Build a scenario from its maximal contexts, computing the down-closure.

        Raises:
            ScenarioError: duplicate or unknown observables, an observable in
                no context, cardinality < 2, or overlapping independence sets
        """
        observables = tuple(observables)
        if len(set(observables)) != len(observables):
            raise ScenarioError(f"duplicate observable names in {observables}")
        if not observables:
            raise ScenarioError("a scenario needs at least one observable")
        known = set(observables)

        if isinstance(cardinalities, int):
            cards = {name: cardinalities for name in observables}
        else:
            cards = {name: int(cardinalities.get(name, 2)) for name in observables}
            unknown = set(cardinalities) - known
            if unknown:
                raise ScenarioError(f"cardinalities for unknown observables: {sorted(unknown)}")
        bad = [name for name, k in cards.items() if k < 2]
        if bad:
            raise ScenarioError(f"outcome cardinality must be >= 2 for {bad}")

        contexts: set[Subset] = set()
        for context in maximal_contexts:
            members = frozenset(context)
            if not members:
                continue
            unknown = members - known
            if unknown:
                raise ScenarioError(f"context mentions unknown observables: {sorted(unknown)}")
            ordered = [name for name in observables if name in members]
            contexts.update(frozenset(s) for s in nonempty_subsets(ordered))
        covered = set().union(*contexts) if contexts else set()
        missing = known - covered
        if missing:
            raise ScenarioError(f"observables in no context: {sorted(missing)}")

        pairs: list[Independence] = []
        for left, right in independences:
            s, t = frozenset(left), frozenset(right)
            if not s or not t:
                raise ScenarioError("independence sets must be nonempty")
            if s & t:
                raise ScenarioError(f"independence sets overlap: {sorted(s & t)}")
            if (s | t) - known:
                unknown = sorted((s | t) - known)
                raise ScenarioError(f"independence mentions unknown observables: {unknown}")
            pairs.append((s, t))

        groups = tuple(tuple(p) for p in parties) if parties is not None else None
        return cls(observables, frozenset(contexts), cards, tuple(pairs), name, groups)

    @property
    def n(self) -> int:
        return len(self.observables)

    def index(self, observable: str) -> int:
        return self._index[observable]

    def order(self, subset: Iterable[str]) -> tuple[str, ...]:
        """Observables of `subset` in scenario order."""
        return tuple(sorted(subset, key=self._index.__getitem__))

    def sort_key(self, subset: Iterable[str]) -> tuple:
        """Fixed coordinate order: by size, then by observable positions."""
        positions = tuple(sorted(self._index[name] for name in subset))
        return (len(positions), positions)

    def sorted_contexts(self) -> list[Subset]:
        return sorted(self.contexts, key=self.sort_key)

    @property
    def maximal_contexts(self) -> list[Subset]:
        maximal = [c for c in self.contexts if not any(c < other for other in self.contexts)]
        return sorted(maximal, key=self.sort_key)

    def is_context(self, subset: Iterable[str]) -> bool:
        return frozenset(subset) in self.contexts

    def containing_context(self, subset: Iterable[str]) -> Subset:
        """A maximal context containing `subset` (first in fixed order)."""
        target = frozenset(subset)
        for context in self.maximal_contexts:
            if target <= context:
                return context
        raise ScenarioError(f"{sorted(target)} is not jointly measurable")

    def cycle_order(self) -> tuple[str, ...]:
        """
        Observables in cyclic order for n-cycle inequalities.

        Bipartite Bell scenarios interleave A0, B0, A1, B1, ...; otherwise the
        pair-context graph must be a single cycle, walked from the first
        observable towards its lower-indexed neighbour.
        """
        if self.parties is not None and len(self.parties) == 2:
            alice, bob = self.parties
            if len(alice) != len(bob):
                raise ScenarioError("cycle order needs equal setting counts")
            return tuple(name for pair in zip(alice, bob) for name in pair)
        maximal = self.maximal_contexts
        if any(len(c) != 2 for c in maximal) or self.n < 3:
            raise ScenarioError(f"scenario {self.name or '?'} is not a cycle")
        neighbours: dict[str, list[str]] = {name: [] for name in self.observables}
        for context in maximal:
            a, b = self.order(context)
            neighbours[a].append(b)
            neighbours[b].append(a)
        if any(len(v) != 2 for v in neighbours.values()):
            raise ScenarioError(f"scenario {self.name or '?'} is not a cycle")
        start = self.observables[0]
        walk = [start]
        previous, current = start, min(neighbours[start], key=self.index)
        while current != start:
            walk.append(current)
            a, b = neighbours[current]
            previous, current = current, (b if a == previous else a)
        if len(walk) != self.n:
            raise ScenarioError(f"scenario {self.name or '?'} is not a single cycle")
        return tuple(walk)

    def to_dict(self) -> dict:
        data = {
            "name": self.name,
            "observables": list(self.observables),
            "maximal_contexts": [list(self.order(c)) for c in self.maximal_contexts],
            "cardinalities": dict(self.cardinalities),
            "independences": [
                [list(self.order(s)), list(self.order(t))] for s, t in self.independences
            ],
        }
        if self.parties is not None:
            data["parties"] = [list(p) for p in self.parties]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "MarginalScenario":
        try:
            return cls.create(
                observables=data["observables"],
                maximal_contexts=data["maximal_contexts"],
                cardinalities=data.get("cardinalities", 2),
                independences=[tuple(pair) for pair in data.get("independences", [])],
                name=data.get("name", ""),
                parties=data.get("parties"),
            )
        except KeyError as exc:
            raise ScenarioError(f"scenario data missing field {exc}") from exc


def ncycle(n: int) -> MarginalScenario:
    """The n-cycle: observables X1..Xn with contexts {X_i, X_i+1} cyclically."""
    if n < 3:
        raise ScenarioError(f"an n-cycle needs n >= 3, got {n}")
    observables = [f"X{i}" for i in range(1, n + 1)]
    contexts = [(observables[i], observables[(i + 1) % n]) for i in range(n)]
    return MarginalScenario.create(observables, contexts, 2, name=f"ncycle:{n}")


def bell(parties: int, settings: int, outcomes: int) -> MarginalScenario:
    """Bell scenario with one observable per party in each maximal context."""
    if parties < 1 or parties > len(PARTY_LETTERS):
        raise ScenarioError(f"parties must be between 1 and {len(PARTY_LETTERS)}")
    if settings < 2 or outcomes < 2:
        raise ScenarioError("settings and outcomes must be >= 2")
    groups = [
        tuple(f"{PARTY_LETTERS[p]}{s}" for s in range(settings)) for p in range(parties)
    ]
    observables = [name for group in groups for name in group]
    return MarginalScenario.create(
        observables,
        list(product(*groups)),
        outcomes,
        name=f"bell:{parties},{settings},{outcomes}",
        parties=groups,
    )


def chsh() -> MarginalScenario:
    scenario = bell(2, 2, 2)
    return MarginalScenario.create(
        scenario.observables,
        scenario.maximal_contexts,
        scenario.cardinalities,
        name="chsh",
        parties=scenario.parties,
    )


def klyachko() -> MarginalScenario:
    scenario = ncycle(5)
    return MarginalScenario.create(
        scenario.observables, scenario.maximal_contexts, 2, name="klyachko"
    )


def chained(k: int) -> MarginalScenario:
    """
    Bipartite chained scenario: A0..A(k-1), B0..B(k-1) on the 2k-cycle
    A0 - B0 - A1 - B1 - ... - B(k-1) - A0. For k = 2 this is the CHSH scenario.
    """
    if k < 2:
        raise ScenarioError(f"a chained scenario needs k >= 2 settings, got {k}")
    if k == 2:
        return chsh()
    alice = tuple(f"A{i}" for i in range(k))
    bob = tuple(f"B{i}" for i in range(k))
    contexts = [(alice[i], bob[i]) for i in range(k)]
    contexts += [(bob[i], alice[(i + 1) % k]) for i in range(k)]
    return MarginalScenario.create(
        alice + bob, contexts, 2, name=f"chained:{k}", parties=(alice, bob)
    )


def bilocality(b_outcomes: int = 2) -> MarginalScenario:
    """
    Entanglement-swapping scenario A - B - C with independent sources.

    B has a single measurement; A and C two settings each.
    """
    observables = ["A0", "A1", "B", "C0", "C1"]
    contexts = [(f"A{x}", "B", f"C{z}") for x in (0, 1) for z in (0, 1)]
    cards = {name: 2 for name in observables}
    cards["B"] = b_outcomes
    return MarginalScenario.create(
        observables,
        contexts,
        cards,
        independences=[(("A0", "A1"), ("C0", "C1"))],
        name="bilocality",
        parties=[("A0", "A1"), ("B",), ("C0", "C1")],
    )


BUILTIN_SCENARIOS = (
    "ncycle:N", "chsh", "chained:K", "klyachko", "bell:P,S,O", "bilocality", "bilocality:D",
)


def builtin_scenario(spec: str) -> MarginalScenario:
    """
    Parse a built-in scenario name.

    Accepts `ncycle:N`, `chsh`, `chained:K`, `klyachko`, `bell:P,S,O` and
    `bilocality` (optionally `bilocality:D` for a D-outcome middle party).
    """
    name, _, argument = spec.strip().partition(":")
    name = name.lower()
    try:
        if name == "ncycle":
            return ncycle(int(argument))
        if name == "chsh" and not argument:
            return chsh()
        if name == "chained":
            return chained(int(argument))
        if name == "klyachko" and not argument:
            return klyachko()
        if name == "bell":
            p, s, o = (int(v) for v in argument.split(","))
            return bell(p, s, o)
        if name == "bilocality":
            return bilocality(int(argument) if argument else 2)
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"bad arguments in scenario name {spec!r}") from exc
    known = ", ".join(BUILTIN_SCENARIOS)
    raise ScenarioError(f"unknown built-in scenario {spec!r}; known: {known}")


def load_scenario(path: Union[str, Path]) -> MarginalScenario:
    """Load a scenario from JSON or YAML."""
    path = Path(path)
    if not path.exists():
        raise ScenarioError(f"scenario file not found: {path}")
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ScenarioError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ScenarioError(f"{path} does not contain a scenario object")
    scenario = MarginalScenario.from_dict(data)
    logger.debug("loaded scenario %s from %s", scenario.name or "?", path)
    return scenario


def dump_scenario(scenario: MarginalScenario, path: Optional[Union[str, Path]] = None) -> str:
    """Serialize to JSON (or YAML for .yaml paths); writes the file when given a path."""
    data = scenario.to_dict()
    if path is not None and Path(path).suffix in (".yaml", ".yml"):
        text = yaml.safe_dump(data, sort_keys=False)
    else:
        text = json.dumps(data, indent=2)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
