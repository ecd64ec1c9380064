"""Tests for exact expressions, the rational simplex, redundancy and elimination."""

from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from entropic.exceptions import CoordinateError, DegenerateExpressionError, ProjectionLimitError
from entropic.geometry import (
    LinearExpr,
    LinearSystem,
    LPStatus,
    as_rational,
    canonicalize,
    canonicalize_equation,
    farkas_certificate,
    fm_eliminate,
    is_implied,
    is_implied_exact,
    lp_solve,
    project_out,
    remove_redundant,
    solve_linear_system,
    solve_standard_form,
    substitute,
    verify_certificate,
)


def expr(constant=0, **coeffs) -> LinearExpr:
    return LinearExpr(coeffs, constant)


class TestRationals:
    def test_float_goes_through_repr(self):
        assert as_rational(0.8) == Fraction(4, 5)

    def test_strings(self):
        assert as_rational("1/3") == Fraction(1, 3)
        assert as_rational("0.25") == Fraction(1, 4)

    def test_booleans_rejected(self):
        with pytest.raises(TypeError):
            as_rational(True)


class TestCanonicalize:
    def test_scales_to_coprime_integers(self):
        canonical = canonicalize(expr(x=Fraction(1, 2), y=Fraction(-3, 4)))
        assert canonical.coeffs == {"x": 2, "y": -3}

    def test_positive_scaling_only(self):
        canonical = canonicalize(expr(x=-2, y=-4))
        assert canonical.coeffs == {"x": -1, "y": -2}

    def test_constant_counts(self):
        canonical = canonicalize(expr(constant=Fraction(3, 2), x=3))
        assert canonical.coeffs == {"x": 2}
        assert canonical.constant == 1

    def test_zero_expression(self):
        with pytest.raises(DegenerateExpressionError):
            canonicalize(LinearExpr())

    def test_equation_sign_fixed_by_first_coordinate(self):
        canonical = canonicalize_equation(expr(x=-2, y=4), {"x": 0, "y": 1})
        assert canonical.coeffs == {"x": 1, "y": -2}


class TestLinearSystem:
    def test_deduplicates_and_drops_trivial(self):
        system = LinearSystem(
            ("x", "y"),
            [expr(x=1), expr(x=2), expr(constant=-1)],
            [LinearExpr()],
        )
        assert system.size == 1
        assert system.equations == []

    def test_undeclared_coordinate(self):
        with pytest.raises(CoordinateError):
            LinearSystem(("x",), [expr(y=1)])

    def test_contains(self):
        system = LinearSystem(("x", "y"), [expr(x=1, y=-1)], [expr(constant=-1, x=1)])
        assert system.contains({"x": 1, "y": 2})
        assert not system.contains({"x": 1, "y": 0})
        assert not system.contains({"x": 2, "y": 3})

    def test_round_trip(self):
        system = LinearSystem(("x", "y"), [expr(x=1, y=-2)], [expr(x=1, y=1)])
        assert LinearSystem.from_dict(system.to_dict()) == system


class TestSimplex:
    def test_standard_form_optimum(self):
        # max x + y  s.t.  x + 2y + s1 = 4, 3x + y + s2 = 6
        result = solve_standard_form(
            [[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6], [1, 1, 0, 0], [2, 3]
        )
        assert result.status == LPStatus.OPTIMAL
        assert result.value == Fraction(14, 5)
        assert result.solution[:2] == [Fraction(8, 5), Fraction(6, 5)]

    def test_infeasible(self):
        result = solve_standard_form([[1, 1]], [-1], [1, 0])
        assert result.status == LPStatus.INFEASIBLE

    def test_unbounded(self):
        result = solve_standard_form([[1, -1]], [0], [1, 0])
        assert result.status == LPStatus.UNBOUNDED

    def test_free_coordinates(self):
        system = LinearSystem(("x", "y"), [expr(constant=-3, x=1), expr(constant=-1, y=-1)])
        result = lp_solve(expr(x=1, y=-1), "max", system)
        assert result.is_optimal
        assert result.value == 4
        assert result.witness == {"x": 3, "y": -1}

    def test_min_direction(self):
        system = LinearSystem(("x",), [expr(constant=2, x=-1)])
        result = lp_solve(expr(x=1), "min", system)
        assert result.value == 2

    def test_equations(self):
        system = LinearSystem(("x", "y"), [expr(x=-1), expr(y=-1)], [expr(constant=-1, x=1, y=1)])
        assert lp_solve(expr(x=1), "max", system).value == 1

    def test_unknown_objective_coordinate(self):
        with pytest.raises(CoordinateError):
            lp_solve(expr(z=1), "max", LinearSystem(("x",)))

    def test_degenerate_problem_terminates(self):
        # classic cycling example for Dantzig's rule; Bland's rule must finish
        rows = [
            [Fraction(1, 2), Fraction(-11, 2), Fraction(-5, 2), 9, 1, 0, 0],
            [Fraction(1, 2), Fraction(-3, 2), Fraction(-1, 2), 1, 0, 1, 0],
            [1, 0, 0, 0, 0, 0, 1],
        ]
        result = solve_standard_form(rows, [0, 0, 1], [10, -57, -9, -24, 0, 0, 0], [4, 5, 6])
        assert result.status == LPStatus.OPTIMAL
        assert result.value == 1


class TestImplication:
    def setup_method(self):
        # x >= 0, y >= 0, x + y <= 1
        self.system = LinearSystem(
            ("x", "y"), [expr(x=-1), expr(y=-1), expr(constant=-1, x=1, y=1)]
        )

    def test_implied(self):
        target = expr(constant=-1, x=1)
        assert is_implied(target, self.system)
        assert is_implied_exact(target, self.system)

    def test_not_implied(self):
        target = expr(x=1, y=-1)
        assert not is_implied(target, self.system)
        assert not is_implied_exact(target, self.system)

    def test_certificate_verifies(self):
        target = expr(constant=-2, x=1, y=1)
        certificate = farkas_certificate(target, self.system)
        assert certificate is not None
        assert verify_certificate(
            target, self.system.inequalities, self.system.equations, certificate
        )

    def test_no_certificate_for_invalid(self):
        assert farkas_certificate(expr(x=1), self.system) is None

    @pytest.mark.parametrize("screening", [True, False])
    def test_remove_redundant(self, screening):
        cut = expr(constant=Fraction(-1, 2), x=-1, y=1)
        system = self.system.with_constraints([expr(constant=-2, x=1), cut])
        reduced = remove_redundant(system, screening=screening)
        assert reduced.size == 4
        assert canonicalize(expr(constant=-2, x=1)) not in reduced.inequalities

    def test_remove_redundant_independent_of_workers(self):
        system = self.system.with_constraints([expr(constant=-2, x=1), expr(constant=-3, y=1)])
        assert remove_redundant(system, workers=1) == remove_redundant(system, workers=4)


class TestElimination:
    def test_fourier_motzkin(self):
        # 0 <= y <= x <= 1 projected on y gives 0 <= y <= 1
        system = LinearSystem(
            ("x", "y"), [expr(y=-1), expr(x=-1, y=1), expr(constant=-1, x=1)]
        )
        projected = fm_eliminate(system, "x")
        assert projected.coordinates == ("y",)
        assert set(projected.inequalities) == {expr(y=-1), expr(constant=-1, y=1)}

    def test_substitution(self):
        system = LinearSystem(("x", "y"), [expr(constant=-1, x=1)], [expr(x=1, y=-2)])
        reduced = substitute(system, system.equations[0], "x")
        assert reduced.coordinates == ("y",)
        assert reduced.inequalities == [canonicalize(expr(constant=-1, y=2))]

    def test_substitution_needs_coordinate(self):
        system = LinearSystem(("x", "y"), [], [expr(x=1)])
        with pytest.raises(CoordinateError):
            substitute(system, system.equations[0], "y")

    def test_project_out_report(self):
        system = LinearSystem(
            ("x", "y", "z"),
            [expr(z=-1), expr(y=1, z=-1), expr(x=1, y=-1), expr(constant=-1, x=-1)],
        )
        projected, report = project_out(system, ["y", "z"])
        assert projected.coordinates == ("x",)
        assert set(projected.inequalities) == {expr(constant=-1, x=-1)}
        assert {s.coordinate for s in report.steps} == {"y", "z"}

    def test_cap(self):
        inequalities = [expr(x=1, **{f"y{i}": 1}) for i in range(5)]
        inequalities += [expr(x=-1, **{f"y{i}": -1}) for i in range(5, 10)]
        system = LinearSystem(("x",) + tuple(f"y{i}" for i in range(10)), inequalities)
        with pytest.raises(ProjectionLimitError) as info:
            project_out(system, ["x"], cap=10)
        assert info.value.details()["cap"] == 10


def random_system(rng: np.random.Generator, coords: tuple[str, ...], extra: int) -> LinearSystem:
    """The box [-3, 3]^n cut by `extra` integer inequalities that keep the origin feasible."""
    inequalities = []
    for name in coords:
        inequalities.append(expr(constant=-3, **{name: 1}))
        inequalities.append(expr(constant=-3, **{name: -1}))
    while len(inequalities) < 2 * len(coords) + extra:
        draws = rng.integers(-3, 4, size=len(coords))
        coeffs = {name: int(c) for name, c in zip(coords, draws) if c}
        if coeffs:
            inequalities.append(LinearExpr(coeffs, int(rng.integers(-4, 0))))
    return LinearSystem(coords, inequalities)


def vertex_values(system: LinearSystem, objective: LinearExpr) -> list[Fraction]:
    """Objective at every feasible intersection of len(coords) constraint hyperplanes."""
    coords = system.coordinates
    values = []
    for chosen in combinations(system.inequalities, len(coords)):
        rows = [[e.coefficient(name) for name in coords] for e in chosen]
        point = solve_linear_system(rows, [-e.constant for e in chosen])
        if point is None:
            continue
        named = dict(zip(coords, point))
        if system.contains(named):
            values.append(objective.evaluate(named))
    return values


class TestRandomSystems:
    @pytest.mark.parametrize("seed", range(6))
    def test_elimination_matches_extension(self, seed):
        rng = np.random.default_rng(seed)
        system = random_system(rng, ("x", "y", "z"), 2)
        eliminated = fm_eliminate(system, "z")
        pruned, _ = project_out(system, ["z"])
        for _ in range(30):
            x0, y0 = (Fraction(int(v), 2) for v in rng.integers(-8, 9, size=2))
            pinned = system.with_constraints(
                equations=[expr(constant=-x0, x=1), expr(constant=-y0, y=1)]
            )
            extends = lp_solve(expr(z=1), "max", pinned).status is not LPStatus.INFEASIBLE
            point = {"x": x0, "y": y0}
            assert eliminated.contains(point) == extends
            assert pruned.contains(point) == extends

    @pytest.mark.parametrize("dimension, seed", [(2, 0), (2, 1), (2, 2), (3, 3), (3, 4), (3, 5)])
    def test_simplex_matches_vertex_enumeration(self, dimension, seed):
        rng = np.random.default_rng(seed)
        coords = ("x", "y", "z")[:dimension]
        system = random_system(rng, coords, 8 - 2 * dimension)
        objective = LinearExpr(
            {name: int(c) for name, c in zip(coords, rng.integers(-3, 4, size=dimension))}
        )
        values = vertex_values(system, objective)
        assert values
        assert lp_solve(objective, "max", system).value == max(values)
        assert lp_solve(objective, "min", system).value == min(values)
