"""Entropic inequalities: normal form, evaluation, symmetry classes and triviality."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Mapping, Optional, Sequence, Union

from ..exceptions import CoordinateError, DegenerateExpressionError
from ..geometry import LinearExpr, LinearSystem, as_rational, is_implied
from ..scenarios import MarginalScenario, SymmetryGroup, apply_permutation
from .cone import elemental_inequalities, independence_equations
from .vector import EntropySpace, EntropyVector, Subset, as_subset

logger = logging.getLogger(__name__)


def _default_key(subset: Subset) -> tuple:
    return (len(subset), tuple(sorted(subset)))


class EntropicInequality:
    """
    A linear inequality `sum(coeffs[S] * H(S)) <= 0` (or an equation `= 0`).

    Coefficients are stored in canonical integer form with gcd 1. Equations
    additionally have a positive coefficient on their largest subset.
    """

    __slots__ = ("coeffs", "sense")

    def __init__(
        self,
        coeffs: Mapping[Union[Subset, str, tuple], Union[int, Fraction, str]],
        sense: str = "<=",
    ):
        if sense not in ("<=", "="):
            raise ValueError(f"sense must be '<=' or '=', got {sense!r}")
        rational: dict[Subset, Fraction] = {}
        for key, value in coeffs.items():
            subset = as_subset(key)
            q = as_rational(value)
            if not subset:
                raise CoordinateError("H(empty set) is not a coordinate")
            if q != 0:
                rational[subset] = rational.get(subset, Fraction(0)) + q
        rational = {s: q for s, q in rational.items() if q != 0}
        if not rational:
            raise DegenerateExpressionError("entropic inequality has no nonzero coefficient")
        denominator = lcm(*(q.denominator for q in rational.values()))
        integers = {s: int(q * denominator) for s, q in rational.items()}
        divisor = gcd(*integers.values())
        canonical = {s: v // divisor for s, v in integers.items()}
        if sense == "=":
            lead = max(canonical, key=_default_key)
            if canonical[lead] < 0:
                canonical = {s: -v for s, v in canonical.items()}
        self.coeffs: dict[Subset, int] = canonical
        self.sense = sense

    @property
    def is_equation(self) -> bool:
        return self.sense == "="

    @property
    def subsets(self) -> frozenset[Subset]:
        return frozenset(self.coeffs)

    def coefficient(self, subset: Union[Subset, str]) -> int:
        return self.coeffs.get(as_subset(subset), 0)

    def vector(self, order: Sequence[Subset]) -> tuple[int, ...]:
        return tuple(self.coeffs.get(s, 0) for s in order)

    def sort_key(self, space: EntropySpace) -> tuple[int, ...]:
        return self.vector(space.coordinates)

    def evaluate(self, entropies: EntropyVector) -> float:
        return evaluate(self, entropies)

    def permuted(self, permutation: Mapping[str, str]) -> "EntropicInequality":
        return EntropicInequality(
            {apply_permutation(s, permutation): c for s, c in self.coeffs.items()}, self.sense
        )

    def to_expr(self, space: EntropySpace) -> LinearExpr:
        return LinearExpr({space.name(s): c for s, c in self.coeffs.items()})

    @classmethod
    def from_expr(cls, expr: LinearExpr, sense: str = "<=") -> "EntropicInequality":
        if expr.constant != 0:
            raise ValueError("entropic inequalities are homogeneous")
        return cls({as_subset(name): c for name, c in expr.coeffs.items()}, sense)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EntropicInequality):
            return NotImplemented
        return self.coeffs == other.coeffs and self.sense == other.sense

    def __hash__(self) -> int:
        return hash((frozenset(self.coeffs.items()), self.sense))

    def format(self, space: Optional[EntropySpace] = None) -> str:
        """Readable form: positive terms on the left, negative on the right."""
        ordered = space.sort(self.coeffs) if space else sorted(self.coeffs, key=_default_key)

        def term(subset: Subset, c: int) -> str:
            label = space.label(subset) if space else "H(" + "".join(sorted(subset)) + ")"
            return label if abs(c) == 1 else f"{abs(c)}{label}"

        left = " + ".join(term(s, c) for s, c in ((s, self.coeffs[s]) for s in ordered) if c > 0)
        right = " + ".join(term(s, c) for s, c in ((s, self.coeffs[s]) for s in ordered) if c < 0)
        relation = "=" if self.is_equation else "<="
        return f"{left or '0'} {relation} {right or '0'}"

    def __repr__(self) -> str:
        return f"EntropicInequality({self.format()})"

    def to_dict(self, space: EntropySpace) -> dict:
        return {
            "sense": self.sense,
            "coeffs": {space.name(s): self.coeffs[s] for s in space.sort(self.coeffs)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EntropicInequality":
        return cls(data["coeffs"], data.get("sense", "<="))


@dataclass
class InequalityClass:
    """An orbit of inequalities under a symmetry group."""

    representative: EntropicInequality
    orbit: list[EntropicInequality] = field(default_factory=list)
    trivial: Optional[bool] = None

    @property
    def size(self) -> int:
        return len(self.orbit)

    def to_dict(self, space: EntropySpace) -> dict:
        data = {
            "representative": self.representative.to_dict(space),
            "orbit": [member.to_dict(space) for member in self.orbit],
            "size": self.size,
        }
        if self.trivial is not None:
            data["trivial"] = self.trivial
        return data


Reduction = tuple[Subset, EntropicInequality]


def evaluate(inequality: EntropicInequality, entropies: EntropyVector) -> float:
    """Left-hand side sum(coeff(S) * H(S)); the inequality holds iff this is <= 0."""
    total = 0.0
    for subset, c in inequality.coeffs.items():
        if subset not in entropies.values:
            raise CoordinateError(f"no entropy for {sorted(subset)}")
        total += c * entropies.values[subset]
    return total


def reduce(inequality: EntropicInequality, reductions: Sequence[Reduction]) -> EntropicInequality:
    """
    Re-express an inequality in the reduced basis.

    Each reduction (pivot, equation) eliminates `pivot` by solving the equation.
    """
    coeffs: dict[Subset, Fraction] = {s: Fraction(c) for s, c in inequality.coeffs.items()}
    for pivot, equation in reductions:
        c = coeffs.pop(pivot, None)
        if c is None:
            continue
        lead = Fraction(equation.coeffs[pivot])
        for subset, value in equation.coeffs.items():
            if subset == pivot:
                continue
            coeffs[subset] = coeffs.get(subset, Fraction(0)) - c * value / lead
    return EntropicInequality(coeffs, inequality.sense)


def classify(
    inequalities: Iterable[EntropicInequality],
    group: SymmetryGroup,
    reductions: Sequence[Reduction] = (),
) -> list[InequalityClass]:
    """
    Partition inequalities into orbits under `group`.

    Images are re-reduced by `reductions` so that they live in the same basis.
    Representatives are the lexicographically smallest coefficient vectors
    over the fixed coordinate order; classes are sorted by representative.
    """
    space = EntropySpace(group.observables)
    order = space.coordinates
    pending = list(dict.fromkeys(inequalities))
    assigned: set[EntropicInequality] = set()
    classes: list[InequalityClass] = []
    for inequality in pending:
        if inequality in assigned:
            continue
        images = {reduce(inequality.permuted(g), reductions) for g in group.elements}
        orbit = sorted(images, key=lambda ineq: ineq.vector(order))
        assigned.update(orbit)
        classes.append(InequalityClass(orbit[0], orbit))
    classes.sort(key=lambda cls: cls.representative.vector(order))
    return classes


class Triviality(Enum):
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"


@lru_cache(maxsize=32)
def _context_system(scenario: MarginalScenario) -> LinearSystem:
    space = EntropySpace(scenario.observables)
    names = space.names(scenario.sorted_contexts())
    declared = set(names)
    inequalities: list[LinearExpr] = []
    for context in scenario.maximal_contexts:
        inequalities.extend(elemental_inequalities(space, scenario.order(context)))
    equations = [
        eq for eq in independence_equations(scenario) if eq.variables <= declared
    ]
    return LinearSystem(names, inequalities, equations)


def triviality_filter(inequality: EntropicInequality, scenario: MarginalScenario) -> Triviality:
    """
    TRIVIAL iff implied by the elemental inequalities inside each context plus
    the independence equations among context entropies, i.e. valid for every
    marginal model without assuming a joint distribution.
    """
    space = EntropySpace(scenario.observables)
    system = _context_system(scenario)
    for subset in inequality.coeffs:
        if not scenario.is_context(subset):
            raise CoordinateError(f"{space.label(subset)} is not a context entropy")
    implied = is_implied(inequality.to_expr(space), system)
    return Triviality.TRIVIAL if implied else Triviality.NONTRIVIAL


def mutual_information_form(
    inequality: EntropicInequality, space: Optional[EntropySpace] = None
) -> str:
    """
    Rewrite an inequality over singles and pairs with mutual informations,
    e.g. I(A0:B0) + I(A0:B1) + I(A1:B0) - I(A1:B1) - H(A0) - H(B0) <= 0.

    Raises:
        ValueError: the inequality involves a subset of three or more observables
    """
    if any(len(s) > 2 for s in inequality.coeffs):
        raise ValueError("mutual-information form needs subsets of size at most 2")
    order = space.ordered if space else (lambda s: tuple(sorted(s)))
    sort = space.sort if space else (lambda subsets: sorted(subsets, key=_default_key))
    singles: dict[str, int] = {}
    pairs: list[tuple[tuple[str, str], int]] = []
    for subset in sort(inequality.coeffs):
        c = inequality.coeffs[subset]
        if len(subset) == 1:
            (name,) = subset
            singles[name] = singles.get(name, 0) + c
        else:
            x, y = order(subset)
            # c H(XY) = c H(X) + c H(Y) - c I(X:Y)
            pairs.append(((x, y), -c))
            singles[x] = singles.get(x, 0) + c
            singles[y] = singles.get(y, 0) + c

    terms: list[tuple[int, str]] = [(c, f"I({x}:{y})") for (x, y), c in pairs if c != 0]
    for name in (order(singles) if space else sorted(singles)):
        if singles[name] != 0:
            terms.append((singles[name], f"H({name})"))
    if not terms:
        return "0 <= 0"
    parts = []
    for i, (c, label) in enumerate(terms):
        magnitude = "" if abs(c) == 1 else str(abs(c))
        sign = "-" if c < 0 else "+"
        if i == 0:
            parts.append(f"{'-' if c < 0 else ''}{magnitude}{label}")
        else:
            parts.append(f"{sign} {magnitude}{label}")
    relation = "=" if inequality.is_equation else "<="
    return " ".join(parts) + f" {relation} 0"
