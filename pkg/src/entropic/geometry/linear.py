"""Exact linear expressions and systems over named coordinates."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Optional, Union

from ..exceptions import CoordinateError, DegenerateExpressionError

Rational = Fraction
Number = Union[int, Fraction, str, float]


def as_rational(value: Number) -> Fraction:
    """
    Convert a number to an exact rational.

    Strings may be integers, decimals or "num/den". Floats go through their
    shortest repr so that 0.8 becomes 4/5 rather than its binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


class LinearExpr:
    """
    An affine expression `sum(coeffs[name] * name) + constant`.

    Zero coefficients are never stored. Instances are treated as immutable.
    """

    __slots__ = ("coeffs", "constant")

    def __init__(self, coeffs: Optional[Mapping[str, Number]] = None, constant: Number = 0):
        self.coeffs: dict[str, Fraction] = {}
        for name, value in (coeffs or {}).items():
            q = as_rational(value)
            if q != 0:
                self.coeffs[name] = q
        self.constant = as_rational(constant)

    def coefficient(self, name: str) -> Fraction:
        return self.coeffs.get(name, Fraction(0))

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs and self.constant == 0

    def is_constant(self) -> bool:
        return not self.coeffs

    def scale(self, factor: Number) -> "LinearExpr":
        q = as_rational(factor)
        return LinearExpr({k: v * q for k, v in self.coeffs.items()}, self.constant * q)

    def __add__(self, other: "LinearExpr") -> "LinearExpr":
        coeffs = dict(self.coeffs)
        for name, value in other.coeffs.items():
            coeffs[name] = coeffs.get(name, Fraction(0)) + value
        return LinearExpr(coeffs, self.constant + other.constant)

    def __sub__(self, other: "LinearExpr") -> "LinearExpr":
        return self + other.scale(-1)

    def __neg__(self) -> "LinearExpr":
        return self.scale(-1)

    def substitute(self, name: str, replacement: "LinearExpr") -> "LinearExpr":
        """Replace `name` by `replacement` (which must not mention `name`)."""
        c = self.coeffs.get(name)
        if c is None:
            return self
        rest = LinearExpr({k: v for k, v in self.coeffs.items() if k != name}, self.constant)
        return rest + replacement.scale(c)

    def evaluate(self, point: Mapping[str, Number]) -> Fraction:
        total = self.constant
        for name, value in self.coeffs.items():
            if name not in point:
                raise CoordinateError(f"no value for coordinate {name!r}")
            total += value * as_rational(point[name])
        return total

    def evaluate_float(self, point: Mapping[str, float]) -> float:
        total = float(self.constant)
        for name, value in self.coeffs.items():
            if name not in point:
                raise CoordinateError(f"no value for coordinate {name!r}")
            total += float(value) * point[name]
        return total

    def key(self) -> tuple:
        """Hashable identity (after canonicalization this identifies the halfspace)."""
        return (tuple(sorted(self.coeffs.items())), self.constant)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearExpr):
            return NotImplemented
        return self.coeffs == other.coeffs and self.constant == other.constant

    def __hash__(self) -> int:
        return hash(self.key())

    def to_dict(self) -> dict:
        return {
            "coeffs": {k: str(v) for k, v in sorted(self.coeffs.items())},
            "constant": str(self.constant),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LinearExpr":
        return cls(data.get("coeffs", {}), data.get("constant", 0))

    def format(self, order: Optional[Iterable[str]] = None) -> str:
        names = list(order) if order is not None else sorted(self.coeffs)
        parts = []
        for name in names:
            c = self.coeffs.get(name)
            if c is None:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            term = name if mag == 1 else f"{mag}*{name}"
            parts.append(f"{sign} {term}")
        if self.constant != 0 or not parts:
            sign = "-" if self.constant < 0 else "+"
            parts.append(f"{sign} {abs(self.constant)}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"LinearExpr({self.format()})"


def canonicalize(expr: LinearExpr) -> LinearExpr:
    """
    Scale by the unique positive rational making all entries coprime integers.

    The constant counts as an entry. Raises DegenerateExpressionError on the
    identically-zero expression.
    """
    if expr.is_zero():
        raise DegenerateExpressionError("cannot canonicalize the zero expression")
    entries = list(expr.coeffs.values())
    if expr.constant != 0:
        entries.append(expr.constant)
    denominator = lcm(*(q.denominator for q in entries))
    integers = [int(q * denominator) for q in entries]
    divisor = gcd(*integers)
    return expr.scale(Fraction(denominator, divisor))


def canonicalize_equation(
    expr: LinearExpr, order: Optional[Mapping[str, int]] = None
) -> LinearExpr:
    """Canonical form of `expr = 0`: integer, coprime, first coefficient positive."""
    canonical = canonicalize(expr)
    if canonical.coeffs:
        if order is not None:
            first = min(canonical.coeffs, key=lambda name: order.get(name, len(order)))
        else:
            first = min(canonical.coeffs)
        if canonical.coeffs[first] < 0:
            canonical = canonical.scale(-1)
    elif canonical.constant < 0:
        canonical = canonical.scale(-1)
    return canonical


@dataclass
class LinearSystem:
    """
    Inequalities `expr <= 0` and equations `expr = 0` over declared coordinates.

    Construction canonicalizes and deduplicates; constant inequalities that
    hold trivially (c <= 0) and trivial equations (0 = 0) are dropped.
    """
    coordinates: tuple[str, ...]
    inequalities: list[LinearExpr] = field(default_factory=list)
    equations: list[LinearExpr] = field(default_factory=list)

    def __post_init__(self):
        self.coordinates = tuple(self.coordinates)
        if len(set(self.coordinates)) != len(self.coordinates):
            raise CoordinateError("duplicate coordinate names")
        declared = set(self.coordinates)
        order = self.order
        inequalities: list[LinearExpr] = []
        seen: set = set()
        for expr in self.inequalities:
            self._check_declared(expr, declared)
            if expr.is_constant() and expr.constant <= 0:
                continue
            canonical = canonicalize(expr)
            if canonical.key() not in seen:
                seen.add(canonical.key())
                inequalities.append(canonical)
        equations: list[LinearExpr] = []
        seen = set()
        for expr in self.equations:
            self._check_declared(expr, declared)
            if expr.is_zero():
                continue
            canonical = canonicalize_equation(expr, order)
            if canonical.key() not in seen:
                seen.add(canonical.key())
                equations.append(canonical)
        self.inequalities = inequalities
        self.equations = equations

    @staticmethod
    def _check_declared(expr: LinearExpr, declared: set[str]):
        unknown = expr.variables - declared
        if unknown:
            raise CoordinateError(f"undeclared coordinates: {sorted(unknown)}")

    @property
    def order(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.coordinates)}

    def is_infeasible_trivially(self) -> bool:
        """True when a constant inequality `c <= 0` with c > 0 survived."""
        return any(expr.is_constant() for expr in self.inequalities) or any(
            expr.is_constant() for expr in self.equations
        )

    def contains(self, point: Mapping[str, Number]) -> bool:
        """Exact membership test."""
        return all(expr.evaluate(point) <= 0 for expr in self.inequalities) and all(
            expr.evaluate(point) == 0 for expr in self.equations
        )

    def with_constraints(
        self,
        inequalities: Iterable[LinearExpr] = (),
        equations: Iterable[LinearExpr] = (),
    ) -> "LinearSystem":
        return LinearSystem(
            self.coordinates,
            self.inequalities + list(inequalities),
            self.equations + list(equations),
        )

    def without_inequality(self, index: int) -> "LinearSystem":
        rest = self.inequalities[:index] + self.inequalities[index + 1:]
        return LinearSystem(self.coordinates, rest, list(self.equations))

    def drop_coordinate(self, name: str) -> "LinearSystem":
        """Remove a coordinate that no constraint references any more."""
        for expr in self.inequalities + self.equations:
            if name in expr.coeffs:
                raise CoordinateError(f"coordinate {name!r} is still referenced")
        return LinearSystem(
            tuple(c for c in self.coordinates if c != name),
            list(self.inequalities),
            list(self.equations),
        )

    @property
    def size(self) -> int:
        return len(self.inequalities)

    def to_dict(self) -> dict:
        return {
            "coordinates": list(self.coordinates),
            "inequalities": [e.to_dict() for e in self.inequalities],
            "equations": [e.to_dict() for e in self.equations],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LinearSystem":
        return cls(
            tuple(data["coordinates"]),
            [LinearExpr.from_dict(e) for e in data.get("inequalities", [])],
            [LinearExpr.from_dict(e) for e in data.get("equations", [])],
        )

    def __repr__(self) -> str:
        return (
            f"LinearSystem({len(self.coordinates)} coords, "
            f"{len(self.inequalities)} inequalities, {len(self.equations)} equations)"
        )


def solve_linear_system(
    rows: list[list[Fraction]],
    rhs: list[Fraction],
) -> Optional[list[Fraction]]:
    """
    Exact Gauss-Jordan solve of `rows @ x = rhs`.

    Returns one solution with free variables set to zero, or None when the
    system is inconsistent.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    matrix = [list(row) + [b] for row, b in zip(rows, rhs)]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, m) if matrix[i][col] != 0), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        lead = matrix[r][col]
        matrix[r] = [v / lead for v in matrix[r]]
        for i in range(m):
            if i != r and matrix[i][col] != 0:
                f = matrix[i][col]
                matrix[i] = [a - f * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if matrix[i][n] != 0:
            return None
    solution = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        solution[col] = matrix[i][n]
    return solution
