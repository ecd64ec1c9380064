"""Named box families with exact rational tables."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Optional

import numpy as np

from ..exceptions import ParameterError
from ..geometry import as_rational
from ..scenarios import MarginalScenario, bell, bilocality
from .model import MarginalModel, mix

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


def bipartite_box(
    d: int,
    probability: Callable[[int, int, int, int], Fraction],
    scenario: Optional[MarginalScenario] = None,
) -> MarginalModel:
    """Build a bell(2,2,d) box from P(a, b | x, y)."""
    scenario = scenario or bell(2, 2, d)
    (a0, a1), (b0, b1) = scenario.parties
    tables = {}
    for x, alice in enumerate((a0, a1)):
        for y, bob in enumerate((b0, b1)):
            table = np.empty((d, d), dtype=object)
            for a, b in product(range(d), repeat=2):
                table[a, b] = Fraction(probability(a, b, x, y))
            tables[(alice, bob)] = table
    return MarginalModel.create(scenario, tables)


def _check_unit(name: str, value: Fraction):
    if not 0 <= value <= 1:
        raise ParameterError(f"{name} must lie in [0, 1], got {value}")


def pr_box() -> MarginalModel:
    """P(a,b|x,y) = 1/4 [1 + (-1)^(a+b+xy)]."""
    return bipartite_box(2, lambda a, b, x, y: HALF if (a ^ b) == (x & y) else 0)


def antipr_box() -> MarginalModel:
    return bipartite_box(2, lambda a, b, x, y: HALF if (a ^ b) == (x & y) ^ 1 else 0)


def classical_box() -> MarginalModel:
    """Perfect classical correlation a = b."""
    return bipartite_box(2, lambda a, b, x, y: HALF if a == b else 0)


def anticlassical_box() -> MarginalModel:
    return bipartite_box(2, lambda a, b, x, y: HALF if a != b else 0)


def white_box(d: int = 2) -> MarginalModel:
    return bipartite_box(d, lambda a, b, x, y: Fraction(1, d * d))


def isotropic_box(c) -> MarginalModel:
    """Mixture of PR with white noise; CHSH value 4C."""
    c = as_rational(c)
    _check_unit("C", c)
    return bipartite_box(2, lambda a, b, x, y: QUARTER * (1 + c * (-1) ** (a ^ b ^ (x & y))))


def pmax_box() -> MarginalModel:
    """Equal mixture of PR and classical correlation."""
    return mix([pr_box(), classical_box()], [HALF, HALF])


def pf_box() -> MarginalModel:
    """Half-way between PR and white noise: 1/8 [2 + (-1)^(a+b+xy)]."""
    return bipartite_box(2, lambda a, b, x, y: Fraction(1, 8) * (2 + (-1) ** (a ^ b ^ (x & y))))


def triangle_box(gamma, xi) -> MarginalModel:
    """gamma PR + xi P^c + (1 - gamma - xi) P^f."""
    gamma, xi = as_rational(gamma), as_rational(xi)
    if gamma < 0 or xi < 0 or gamma + xi > 1:
        raise ParameterError(
            f"triangle needs gamma, xi >= 0 and gamma + xi <= 1, got {gamma}, {xi}"
        )
    return mix([pr_box(), classical_box(), pf_box()], [gamma, xi, 1 - gamma - xi])


def prd_box(d: int) -> MarginalModel:
    """Generalized PR box: (a - b) mod d = xy with probability 1/d."""
    _check_dimension(d)
    return bipartite_box(d, lambda a, b, x, y: Fraction(1, d) if (a - b) % d == x * y else 0)


def classical_d_box(d: int) -> MarginalModel:
    _check_dimension(d)
    return bipartite_box(d, lambda a, b, x, y: Fraction(1, d) if a == b else 0)


def dfamily_box(xi, d: int) -> MarginalModel:
    """xi PR_d + (1 - xi) P^c_d."""
    xi = as_rational(xi)
    _check_unit("xi", xi)
    _check_dimension(d)
    return mix([prd_box(d), classical_d_box(d)], [xi, 1 - xi])


def _check_dimension(d: int):
    if int(d) != d or d < 2:
        raise ParameterError(f"outcome count d must be an integer >= 2, got {d}")


def _check_nb(xi: Fraction, gamma: Fraction):
    if xi < 0 or gamma < 0 or xi + gamma > 1:
        raise ParameterError(f"NB needs xi, gamma >= 0 and xi + gamma <= 1, got {xi}, {gamma}")


def nb_box(xi, gamma) -> MarginalModel:
    """
    Tripartite bilocality box
    P(a,b,c|x,z) = 1/8 [1 + xi (-1)^(a+b+c+xz) + (1 - xi - gamma) (-1)^(a+b+c)].

    The A-C marginal is white noise for every parameter value.
    """
    xi, gamma = as_rational(xi), as_rational(gamma)
    _check_nb(xi, gamma)
    rest = 1 - xi - gamma
    scenario = bilocality()
    tables = {}
    for x, z in product((0, 1), repeat=2):
        table = np.empty((2, 2, 2), dtype=object)
        for a, b, c in product((0, 1), repeat=3):
            parity = a ^ b ^ c
            table[a, b, c] = Fraction(1, 8) * (
                1 + xi * (-1) ** (parity ^ (x & z)) + rest * (-1) ** parity
            )
        tables[(f"A{x}", "B", f"C{z}")] = table
    return MarginalModel.create(scenario, tables)


def nb_conditional_box(xi, gamma, b: int) -> MarginalModel:
    """
    The A-C box of NB(xi, gamma) conditioned on B's outcome b, as a bell(2,2,2)
    box with C renamed to B: xi PR + (1-xi-gamma) P^c + gamma P^w for b = 0 and
    the anti versions for b = 1.
    """
    xi, gamma = as_rational(xi), as_rational(gamma)
    _check_nb(xi, gamma)
    if b not in (0, 1):
        raise ParameterError(f"b must be 0 or 1, got {b}")
    rest = 1 - xi - gamma
    sign = (-1) ** b
    return bipartite_box(
        2,
        lambda a, c, x, z: QUARTER * (
            1 + sign * xi * (-1) ** (a ^ c ^ (x & z)) + sign * rest * (-1) ** (a ^ c)
        ),
    )


@dataclass(frozen=True)
class BoxFamily:
    """A named family: factory plus parameter names."""

    name: str
    factory: Callable[..., MarginalModel]
    parameters: tuple[str, ...] = ()
    description: str = ""

    def build(self, *args) -> MarginalModel:
        if len(args) != len(self.parameters):
            raise ParameterError(
                f"{self.name} takes {len(self.parameters)} parameter(s) "
                f"({', '.join(self.parameters) or 'none'}), got {len(args)}"
            )
        return self.factory(*args)


NAMED_BOXES: dict[str, BoxFamily] = {
    family.name: family
    for family in (
        BoxFamily("pr", pr_box, (), "PR box, CHSH = 4"),
        BoxFamily("antipr", antipr_box, (), "PR box with flipped parity"),
        BoxFamily("iso", isotropic_box, ("C",), "PR mixed with white noise, CHSH = 4C"),
        BoxFamily("classical", classical_box, (), "perfect correlation a = b"),
        BoxFamily("anticlassical", anticlassical_box, (), "perfect anticorrelation"),
        BoxFamily("white", white_box, (), "uniform noise"),
        BoxFamily("pmax", pmax_box, (), "1/2 PR + 1/2 classical, CHSH_E = 1"),
        BoxFamily("pf", pf_box, (), "1/2 PR + 1/2 white noise"),
        BoxFamily("triangle", triangle_box, ("gamma", "xi"), "gamma PR + xi P^c + rest P^f"),
        BoxFamily("prd", prd_box, ("d",), "generalized PR box with d outcomes"),
        BoxFamily("classical_d", classical_d_box, ("d",), "classical correlation, d outcomes"),
        BoxFamily("dfamily", dfamily_box, ("xi", "d"), "xi PR_d + (1 - xi) P^c_d"),
        BoxFamily("nb", nb_box, ("xi", "gamma"), "bilocality box with white A-C marginal"),
    )
}


def _parse_argument(name: str, text: str):
    if name == "d":
        return int(text)
    return as_rational(text)


def named_box(name: str, *params) -> MarginalModel:
    """Build a named box; unknown names raise ParameterError."""
    family = NAMED_BOXES.get(name.lower())
    if family is None:
        raise ParameterError(f"unknown box {name!r}; known: {', '.join(NAMED_BOXES)}")
    return family.build(*params)


def builtin_box(spec: str) -> MarginalModel:
    """Parse "name" or "name:p1,p2" (e.g. "iso:0.8", "dfamily:1/2,3")."""
    name, _, argument = spec.strip().partition(":")
    family = NAMED_BOXES.get(name.lower())
    if family is None:
        raise ParameterError(f"unknown box {name!r}; known: {', '.join(NAMED_BOXES)}")
    texts = [t for t in argument.split(",") if t.strip()] if argument else []
    if len(texts) != len(family.parameters):
        raise ParameterError(
            f"{family.name} takes parameters ({', '.join(family.parameters)}), got {argument!r}"
        )
    try:
        values = [_parse_argument(p, t) for p, t in zip(family.parameters, texts)]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"bad parameters in {spec!r}") from exc
    return family.build(*values)
