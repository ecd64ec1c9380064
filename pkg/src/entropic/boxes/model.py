"""Marginal models (boxes): per-context joint distributions with the sheaf condition."""

import json
import logging
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np
import yaml

from ..config import config
from ..exceptions import InvalidBoxError, ScenarioError
from ..geometry import as_rational
from ..scenarios import MarginalScenario, builtin_scenario

logger = logging.getLogger(__name__)

Context = tuple[str, ...]
TableLike = Union[np.ndarray, Mapping[tuple[int, ...], object], Sequence]


def _is_exact(array: np.ndarray) -> bool:
    return array.dtype == object


def _to_array(scenario: MarginalScenario, context: Context, data: TableLike) -> np.ndarray:
    shape = tuple(scenario.cardinalities[name] for name in context)
    if isinstance(data, Mapping):
        values = list(data.values())
        exact = all(isinstance(v, (int, Fraction, str)) for v in values)
        if exact:
            array = np.empty(shape, dtype=object)
            array.fill(Fraction(0))
        else:
            array = np.zeros(shape)
        for key, value in data.items():
            outcome = tuple(int(v) for v in (key.split(",") if isinstance(key, str) else key))
            if len(outcome) != len(shape) or any(not 0 <= o < k for o, k in zip(outcome, shape)):
                raise InvalidBoxError(f"bad outcome {outcome} for context {','.join(context)}")
            array[outcome] = as_rational(value) if exact else float(value)
        return array
    array = np.asarray(data)
    if array.dtype == object:
        array = np.vectorize(as_rational, otypes=[object])(array) if array.size else array
    else:
        array = array.astype(float)
    if array.shape != shape:
        raise InvalidBoxError(
            f"table for {','.join(context)} has shape {array.shape}, expected {shape}"
        )
    return array


class MarginalModel:
    """
    A box: one joint distribution per maximal context.

    Tables are numpy arrays indexed by outcomes in scenario observable order;
    exact boxes hold Fractions (dtype=object), real boxes hold floats.
    Sub-context distributions are obtained by marginalization.
    """

    def __init__(self, scenario: MarginalScenario, tables: dict[Context, np.ndarray]):
        self.scenario = scenario
        self.tables = tables

    @classmethod
    def create(
        cls,
        scenario: MarginalScenario,
        tables: Mapping[Union[str, Iterable[str]], TableLike],
        *,
        validate: bool = True,
        tolerance: Optional[float] = None,
    ) -> "MarginalModel":
        """
        Build and (by default) validate a box.

        Args:
            scenario: The marginal scenario
            tables: Maximal context (names or "A0,B0") to table; arrays are
                indexed in the scenario's observable order
            validate: Check nonnegativity, normalization and the sheaf condition
            tolerance: Override the validation tolerance (0 for exact boxes)

        Raises:
            InvalidBoxError: missing tables or violated constraints
        """
        converted: dict[Context, np.ndarray] = {}
        for key, data in tables.items():
            members = key.split(",") if isinstance(key, str) else list(key)
            context = scenario.order(members)
            converted[context] = _to_array(scenario, context, data)
        expected = {scenario.order(c) for c in scenario.maximal_contexts}
        missing = expected - set(converted)
        if missing:
            raise InvalidBoxError(
                "missing context tables", [",".join(c) for c in sorted(missing)]
            )
        extra = set(converted) - expected
        if extra:
            raise InvalidBoxError(
                "tables for non-maximal contexts", [",".join(c) for c in sorted(extra)]
            )
        ordered = {c: converted[c] for c in (scenario.order(m) for m in scenario.maximal_contexts)}
        box = cls(scenario, ordered)
        if validate:
            violations = box.validate(tolerance)
            if violations:
                raise InvalidBoxError("invalid marginal model", violations)
        return box

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(t) for t in self.tables.values())

    @property
    def contexts(self) -> list[Context]:
        return list(self.tables)

    def table(self, context: Iterable[str]) -> np.ndarray:
        return self.marginal(context)

    def marginal(self, subset: Iterable[str]) -> np.ndarray:
        """Distribution on any context subset, axes in scenario order."""
        members = self.scenario.order(subset)
        target = frozenset(members)
        for context, table in self.tables.items():
            if target <= frozenset(context):
                axes = tuple(i for i, name in enumerate(context) if name not in target)
                return table.sum(axis=axes) if axes else table
        raise ScenarioError(f"{','.join(members)} is not jointly measurable")

    def probability(self, assignment: Mapping[str, int]):
        outcome = tuple(assignment[n] for n in self.scenario.order(assignment))
        return self.marginal(assignment.keys())[outcome]

    def validate(self, tolerance: Optional[float] = None) -> list[str]:
        """
        List violated constraints: negativity, normalization, and marginal
        disagreement between overlapping contexts. Exact boxes are checked
        exactly unless a tolerance is given.
        """
        exact = self.is_exact
        if tolerance is None:
            tolerance = 0.0 if exact else config.tolerances.quantum
        violations: list[str] = []
        for context, table in self.tables.items():
            label = ",".join(context)
            low = min(table.flat) if table.size else 0
            if low < -tolerance:
                violations.append(f"negative probability {float(low):.3g} in {label}")
            total = table.sum()
            if abs(total - 1) > tolerance:
                violations.append(f"{label} sums to {float(total):.12g}")
        contexts = list(self.tables)
        for i, first in enumerate(contexts):
            for second in contexts[i + 1:]:
                shared = frozenset(first) & frozenset(second)
                if not shared:
                    continue
                names = self.scenario.order(shared)
                a = self._sum_to(first, names)
                b = self._sum_to(second, names)
                gap = max(abs(x - y) for x, y in zip(a.flat, b.flat))
                if gap > tolerance:
                    violations.append(
                        f"marginal on {','.join(names)} differs between "
                        f"{','.join(first)} and {','.join(second)} by {float(gap):.3g}"
                    )
        return violations

    def _sum_to(self, context: Context, names: Sequence[str]) -> np.ndarray:
        axes = tuple(i for i, name in enumerate(context) if name not in names)
        table = self.tables[context]
        return table.sum(axis=axes) if axes else table

    def to_float(self) -> "MarginalModel":
        return MarginalModel(
            self.scenario, {c: t.astype(float) for c, t in self.tables.items()}
        )

    def to_dict(self) -> dict:
        tables = {}
        for context, table in self.tables.items():
            entries = {}
            for outcome in product(*(range(k) for k in table.shape)):
                value = table[outcome]
                entries[",".join(str(o) for o in outcome)] = (
                    str(value) if isinstance(value, Fraction) else float(value)
                )
            tables[",".join(context)] = entries
        return {"scenario": self.scenario.to_dict(), "tables": tables}

    @classmethod
    def from_dict(cls, data: dict, **kwargs) -> "MarginalModel":
        raw = data.get("scenario")
        if isinstance(raw, str):
            scenario = builtin_scenario(raw)
        elif isinstance(raw, dict):
            scenario = MarginalScenario.from_dict(raw)
        else:
            raise ScenarioError("box data needs a scenario (built-in name or object)")
        tables = {}
        for key, entries in data.get("tables", {}).items():
            tables[key] = {
                outcome: (value if isinstance(value, (str, int)) else float(value))
                for outcome, value in entries.items()
            }
        return cls.create(scenario, tables, **kwargs)

    def __repr__(self) -> str:
        kind = "exact" if self.is_exact else "real"
        name = self.scenario.name or "?"
        return f"MarginalModel({name}, {len(self.tables)} contexts, {kind})"


def marginal(box: MarginalModel, subset: Iterable[str]) -> np.ndarray:
    return box.marginal(subset)


def validate(box: MarginalModel, tolerance: Optional[float] = None) -> list[str]:
    return box.validate(tolerance)


def mix(boxes: Sequence[MarginalModel], weights: Sequence[object]) -> MarginalModel:
    """Convex combination of boxes on the same scenario."""
    if len(boxes) != len(weights) or not boxes:
        raise ValueError("mix needs one weight per box")
    scenario = boxes[0].scenario
    if any(b.scenario.contexts != scenario.contexts for b in boxes):
        raise ScenarioError("mixed boxes must share a scenario")
    exact = all(b.is_exact for b in boxes) and all(
        isinstance(w, (int, Fraction, str)) for w in weights
    )
    coefficients = [as_rational(w) if exact else float(w) for w in weights]
    tables = {}
    for context in boxes[0].tables:
        total = sum(w * b.tables[context] for w, b in zip(coefficients, boxes))
        tables[context] = total if exact else np.asarray(total, dtype=float)
    return MarginalModel.create(scenario, tables)


def relabel_outcomes(
    box: MarginalModel, observable: str, permutation: Sequence[int]
) -> MarginalModel:
    """Apply an outcome permutation (new = permutation[old]) to one observable."""
    k = box.scenario.cardinalities[observable]
    if sorted(permutation) != list(range(k)):
        raise ValueError(f"not a permutation of {k} outcomes: {permutation}")
    inverse = [0] * k
    for old, new in enumerate(permutation):
        inverse[new] = old
    tables = {}
    for context, table in box.tables.items():
        if observable in context:
            axis = context.index(observable)
            tables[context] = np.take(table, inverse, axis=axis)
        else:
            tables[context] = table
    return MarginalModel(box.scenario, tables)


def load_box(path: Union[str, Path], **kwargs) -> MarginalModel:
    """Load a box from JSON or YAML."""
    path = Path(path)
    if not path.exists():
        raise InvalidBoxError(f"box file not found: {path}")
    text = path.read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text) if path.suffix in (".yaml", ".yml") else json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise InvalidBoxError(f"cannot parse {path}: {exc}") from exc
    box = MarginalModel.from_dict(data, **kwargs)
    logger.debug("loaded %r from %s", box, path)
    return box


def dump_box(box: MarginalModel) -> str:
    return json.dumps(box.to_dict(), indent=2)
