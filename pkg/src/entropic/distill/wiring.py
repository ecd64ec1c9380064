"""Two-copy wirings of bipartite boxes."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Optional

import numpy as np

from ..boxes import MarginalModel
from ..exceptions import ScenarioShapeError, WiringError
from ..scenarios import MarginalScenario, bell

logger = logging.getLogger(__name__)

SETTINGS = 2


def _party_names(scenario: MarginalScenario) -> tuple[tuple[str, str], tuple[str, str]]:
    parties = scenario.parties
    if parties is None or len(parties) != 2 or any(len(p) != SETTINGS for p in parties):
        raise ScenarioShapeError(
            f"expected a bipartite two-setting box, got {scenario.name or '?'}"
        )
    return tuple(parties[0]), tuple(parties[1])


def outcome_count(box: MarginalModel) -> int:
    alice, bob = _party_names(box.scenario)
    counts = {box.scenario.cardinalities[n] for n in alice + bob}
    if len(counts) != 1:
        raise ScenarioShapeError("all observables of a wired box need the same outcome count")
    return counts.pop()


def bipartite_tensor(box: MarginalModel) -> np.ndarray:
    """P[x, y, a, b] for a bipartite two-setting box (object dtype when exact)."""
    (a0, a1), (b0, b1) = _party_names(box.scenario)
    d = outcome_count(box)
    exact = box.is_exact
    tensor = np.empty((SETTINGS, SETTINGS, d, d), dtype=object if exact else float)
    for x, alice in enumerate((a0, a1)):
        for y, bob in enumerate((b0, b1)):
            tensor[x, y] = box.marginal((alice, bob))
    return tensor


def box_from_tensor(
    tensor: np.ndarray, scenario: Optional[MarginalScenario] = None, validate: bool = True
) -> MarginalModel:
    """Inverse of `bipartite_tensor` on bell(2, 2, d) (or a given scenario)."""
    d = tensor.shape[2]
    scenario = scenario or bell(2, SETTINGS, d)
    (a0, a1), (b0, b1) = _party_names(scenario)
    tables = {
        (alice, bob): tensor[x, y]
        for x, alice in enumerate((a0, a1))
        for y, bob in enumerate((b0, b1))
    }
    return MarginalModel.create(scenario, tables, validate=validate)


@dataclass(frozen=True)
class PartyWiring:
    """
    Local circuitry of one party around two boxes with `outcomes` outputs.

    Attributes:
        first: first[x] is the input to the first box
        second: second[x][a1] is the input to the second box
        output: output[x][a1][a2] is the final outcome
    """
    outcomes: int
    first: tuple[int, ...]
    second: tuple[tuple[int, ...], ...]
    output: tuple[tuple[tuple[int, ...], ...], ...]

    @classmethod
    def from_rules(
        cls,
        outcomes: int,
        first: Callable[[int], int],
        second: Callable[[int, int], int],
        output: Callable[[int, int, int], int],
    ) -> "PartyWiring":
        d = outcomes
        return cls(
            d,
            tuple(first(x) for x in range(SETTINGS)),
            tuple(tuple(second(x, a1) for a1 in range(d)) for x in range(SETTINGS)),
            tuple(
                tuple(tuple(output(x, a1, a2) for a2 in range(d)) for a1 in range(d))
                for x in range(SETTINGS)
            ),
        )

    def check(self):
        """Maps are total over the declared alphabets."""
        d = self.outcomes
        inputs = set(self.first) | {s for row in self.second for s in row}
        if not inputs <= set(range(SETTINGS)):
            raise WiringError(f"box inputs {sorted(inputs)} outside 0..{SETTINGS - 1}")
        if len(self.first) != SETTINGS or any(len(row) != d for row in self.second):
            raise WiringError("wiring tables do not cover the input/outcome alphabet")
        outputs = {o for block in self.output for row in block for o in row}
        if not outputs <= set(range(d)):
            raise WiringError(f"wired outcomes {sorted(outputs)} outside 0..{d - 1}")


@dataclass(frozen=True)
class Wiring:
    name: str
    alice: PartyWiring
    bob: PartyWiring

    @property
    def outcomes(self) -> int:
        return self.alice.outcomes

    def to_dict(self) -> dict:
        def tables(party: PartyWiring) -> dict:
            return {"first": party.first, "second": party.second, "output": party.output}

        return {"name": self.name, "alice": tables(self.alice), "bob": tables(self.bob)}


def wire(box: MarginalModel, wiring: Wiring, validate: bool = True) -> MarginalModel:
    """
    Compose two copies of `box` through `wiring`:

        P'(a,b|x,y) = sum P(a1,b1|x1,y1) P(a2,b2|x2(x,a1),y2(y,b1))

    over (a1, b1, a2, b2) whose wired outputs are (a, b). Exact boxes stay exact.

    Raises:
        WiringError: the wiring's alphabet differs from the box's
    """
    d = outcome_count(box)
    if wiring.alice.outcomes != d or wiring.bob.outcomes != d:
        raise WiringError(
            f"wiring {wiring.name} is for {wiring.outcomes} outcomes, box has {d}"
        )
    wiring.alice.check()
    wiring.bob.check()
    p = bipartite_tensor(box)
    exact = box.is_exact
    wired = np.empty_like(p)
    wired.fill(Fraction(0) if exact else 0.0)
    al, bo = wiring.alice, wiring.bob
    for x, y in product(range(SETTINGS), repeat=2):
        first = p[al.first[x], bo.first[y]]
        for a1, b1 in product(range(d), repeat=2):
            weight = first[a1, b1]
            if weight == 0:
                continue
            second = p[al.second[x][a1], bo.second[y][b1]]
            for a2, b2 in product(range(d), repeat=2):
                term = second[a2, b2]
                if term == 0:
                    continue
                wired[x, y, al.output[x][a1][a2], bo.output[y][b1][b2]] += weight * term
    result = box_from_tensor(wired, box.scenario, validate=validate)
    logger.debug("wired %r through %s", box, wiring.name)
    return result


def foster_wiring() -> Wiring:
    """Both boxes get the party's input; output is the XOR of the two outputs."""
    party = PartyWiring.from_rules(2, lambda x: x, lambda x, a1: x, lambda x, a1, a2: a1 ^ a2)
    return Wiring("foster", party, party)


def cavalcanti_wiring() -> Wiring:
    """x1 = x, x2 = x+a1+1, a = a1+a2+1; y1 = 1, y2 = y b1, b = b1+b2+1 (mod 2)."""
    alice = PartyWiring.from_rules(
        2, lambda x: x, lambda x, a1: x ^ a1 ^ 1, lambda x, a1, a2: a1 ^ a2 ^ 1
    )
    bob = PartyWiring.from_rules(
        2, lambda y: 1, lambda y, b1: y & b1, lambda y, b1, b2: b1 ^ b2 ^ 1
    )
    return Wiring("cavalcanti", alice, bob)


def generalized_wiring(d: int) -> Wiring:
    """x1 = x, x2 = x a1 mod 2, a = (a1 + a2) mod d; the same for Bob."""
    if int(d) != d or d < 2:
        raise WiringError(f"generalized wiring needs an integer d >= 2, got {d}")
    party = PartyWiring.from_rules(
        d, lambda x: x, lambda x, a1: (x * a1) % 2, lambda x, a1, a2: (a1 + a2) % d
    )
    return Wiring(f"generalized:{d}", party, party)


WIRINGS = ("foster", "cavalcanti", "generalized:d")


def wiring_library(name: str) -> Wiring:
    """
    Look up `foster`, `cavalcanti` or `generalized:d` (also `generalized(d)`).

    Raises:
        WiringError: unknown name
    """
    key = name.strip().lower()
    if key == "foster":
        return foster_wiring()
    if key == "cavalcanti":
        return cavalcanti_wiring()
    for prefix, suffix in (("generalized:", ""), ("generalized(", ")")):
        if key.startswith(prefix) and key.endswith(suffix):
            argument = key[len(prefix):len(key) - len(suffix)]
            try:
                return generalized_wiring(int(argument))
            except ValueError as exc:
                raise WiringError(f"bad generalized wiring {name!r}") from exc
    raise WiringError(f"unknown wiring {name!r}; known: {', '.join(WIRINGS)}")
