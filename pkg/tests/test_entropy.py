"""Tests for entropy vectors, the Shannon cone, inequalities and the projection."""

from fractions import Fraction

import numpy as np
import pytest

from entropic.boxes import (
    BILOCAL_TABLE,
    bilocal_inequalities,
    chsh_inequality,
    entropy_vector,
    polygon_inequality,
    sample_noncontextual_box,
)
from entropic.exceptions import CoordinateError, DegenerateExpressionError, ParameterError
from entropic.entropy import (
    EntropicInequality,
    EntropySpace,
    EntropyVector,
    Triviality,
    binary_entropy,
    classify,
    elemental_inequalities,
    evaluate,
    facet_rows,
    independence_equations,
    mutual_information_form,
    project,
    reduce,
    shannon_cone,
    shannon_entropy,
    triviality_filter,
)
from entropic.scenarios import bilocality, chsh, ncycle, symmetries


class TestEntropyHelpers:
    def test_shannon_entropy(self):
        assert shannon_entropy([0.5, 0.5]) == pytest.approx(1.0)
        assert shannon_entropy([1.0, 0.0]) == 0.0
        assert shannon_entropy(np.full((2, 2), 0.25)) == pytest.approx(2.0)

    def test_binary_entropy(self):
        assert binary_entropy(0.5) == pytest.approx(1.0)
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(0.11) == pytest.approx(binary_entropy(0.89))

    def test_space_coordinates(self):
        space = EntropySpace(["A", "B", "C"])
        names = space.names(space.coordinates)
        assert names == ("A", "B", "C", "A,B", "A,C", "B,C", "A,B,C")
        assert space.label(frozenset({"B", "A"})) == "H(AB)"

    def test_unknown_coordinate(self):
        with pytest.raises(CoordinateError):
            EntropySpace(["A"]).subset("A,Z")

    def test_vector_access(self):
        vector = EntropyVector.from_dict({"A": 1.0, "B": 1.0, "A,B": 1.5})
        assert vector.H("B", "A") == 1.5
        assert vector.mutual_information("A", "B") == pytest.approx(0.5)
        assert vector[""] == 0.0
        with pytest.raises(CoordinateError):
            vector["C"]


class TestCone:
    def test_elemental_count(self):
        # n + C(n,2) 2^(n-2)
        space = EntropySpace(["A", "B", "C"])
        assert len(elemental_inequalities(space, ["A", "B", "C"])) == 3 + 3 * 2

    def test_shannon_cone_size(self):
        cone = shannon_cone(["A", "B", "C", "D"])
        assert len(cone.coordinates) == 15
        assert cone.size == 4 + 6 * 4

    def test_shannon_cone_limits(self):
        with pytest.raises(ParameterError):
            shannon_cone([f"X{i}" for i in range(7)])

    def test_entropic_point_inside(self):
        # two independent fair bits and their XOR
        cone = shannon_cone(["A", "B", "C"])
        point = {"A": 1, "B": 1, "C": 1, "A,B": 2, "A,C": 2, "B,C": 2, "A,B,C": 2}
        assert cone.contains(point)
        assert not cone.contains({**point, "A,B,C": 3, "A,B": Fraction(1, 2)})

    def test_independence_equations(self):
        equations = independence_equations(bilocality())
        assert len(equations) == 9
        space = EntropySpace(bilocality().observables)
        first = equations[0]
        assert first.coeffs == {
            space.name({"A0", "A1", "C0", "C1"}): 1,
            space.name({"A0", "A1"}): -1,
            space.name({"C0", "C1"}): -1,
        }


class TestInequality:
    def test_normal_form(self):
        ineq = EntropicInequality({"A": Fraction(1, 2), "A,B": "-1/2"})
        assert ineq.coeffs == {frozenset({"A"}): 1, frozenset({"A", "B"}): -1}

    def test_equation_sign(self):
        eq = EntropicInequality({"A": 1, "A,B": -1}, "=")
        assert eq.coefficient("A,B") == 1

    def test_degenerate(self):
        with pytest.raises(DegenerateExpressionError):
            EntropicInequality({"A": 0})

    def test_evaluate(self):
        ineq = chsh_inequality(chsh())
        independent = {
            frozenset(s): float(len(s))
            for s in [("A0",), ("A1",), ("B0",), ("B1",),
                      ("A0", "B0"), ("A0", "B1"), ("A1", "B0"), ("A1", "B1")]
        }
        # all mutual informations vanish: value is -H(A0) - H(B0)
        assert evaluate(ineq, EntropyVector(independent)) == pytest.approx(-2.0)

    def test_evaluate_missing(self):
        with pytest.raises(CoordinateError):
            evaluate(chsh_inequality(chsh()), EntropyVector())

    def test_chsh_is_cycle_row(self):
        assert chsh_inequality(chsh()) == polygon_inequality(chsh().cycle_order(), 3)

    def test_mutual_information_form(self):
        space = EntropySpace(chsh().observables)
        text = mutual_information_form(chsh_inequality(chsh()), space)
        assert text == "I(A0:B0) + I(A0:B1) + I(A1:B0) - I(A1:B1) - H(A0) - H(B0) <= 0"

    def test_mutual_information_form_pairs_only(self):
        with pytest.raises(ValueError):
            mutual_information_form(EntropicInequality({"A,B,C": 1, "A": -1}))

    def test_reduce(self):
        # H(A,C) = H(A) + H(C) eliminates H(A,C)
        equation = EntropicInequality({"A,C": 1, "A": -1, "C": -1}, "=")
        ineq = EntropicInequality({"A,C": -1, "A,B": 1})
        reduced = reduce(ineq, [(frozenset({"A", "C"}), equation)])
        assert reduced == EntropicInequality({"A,B": 1, "A": -1, "C": -1})

    def test_triviality(self):
        scenario = ncycle(3)
        order = scenario.cycle_order()
        assert triviality_filter(polygon_inequality(order, 1), scenario) is Triviality.NONTRIVIAL
        elemental = EntropicInequality({"X1": 1, "X1,X2": -1})
        assert triviality_filter(elemental, scenario) is Triviality.TRIVIAL

    def test_triviality_needs_context_coordinates(self):
        with pytest.raises(CoordinateError):
            triviality_filter(EntropicInequality({"X1,X2,X3": 1, "X1": -1}), ncycle(3))

    def test_classify_cycle(self):
        scenario = ncycle(5)
        order = scenario.cycle_order()
        rows = [polygon_inequality(order, i) for i in range(1, 6)]
        classes = classify(rows, symmetries(scenario))
        assert len(classes) == 1
        assert set(classes[0].orbit) == set(rows)


class TestProjection:
    def test_triangle(self):
        scenario = ncycle(3)
        result = project(scenario)
        order = scenario.cycle_order()
        nontrivial = {
            f for f in result.facets
            if triviality_filter(f, scenario) is Triviality.NONTRIVIAL
        }
        assert nontrivial == {polygon_inequality(order, i) for i in range(1, 4)}
        assert result.equations == []

    def test_projection_is_deterministic(self):
        first = project(ncycle(3))
        second = project(ncycle(3), workers=3)
        assert first.to_dict() == second.to_dict()

    def test_too_many_observables(self):
        with pytest.raises(ParameterError):
            project(ncycle(6))

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [4, 5])
    def test_cycle_theorem(self, n):
        scenario = ncycle(n)
        result = project(scenario)
        order = scenario.cycle_order()
        nontrivial = {
            f for f in result.facets
            if triviality_filter(f, scenario) is Triviality.NONTRIVIAL
        }
        assert nontrivial == {polygon_inequality(order, i) for i in range(1, n + 1)}

    @pytest.mark.slow
    def test_chsh(self):
        scenario = chsh()
        result = project(scenario)
        assert chsh_inequality(scenario) in result.facets

    @pytest.mark.slow
    def test_bilocality(self):
        scenario = bilocality()
        result = project(scenario)
        space = result.space
        assert len(result.equations) == 4
        for equation in result.equations:
            (pair,) = [s for s in equation.coeffs if len(s) == 2]
            assert {name[0] for name in pair} == {"A", "C"}
        assert len(result.facets) == 52
        assert set(result.facets) == set(bilocal_inequalities())
        classes = classify(result.facets, symmetries(scenario), result.reductions)
        assert len(classes) == 10
        header, rows = facet_rows([c.representative for c in classes], space)
        assert len(rows) == len(BILOCAL_TABLE)


class TestProjectionSoundness:
    @staticmethod
    def worst_value(scenario, facets, samples: int, seed: int) -> float:
        """Largest facet LHS over entropy vectors of random joint distributions."""
        rng = np.random.default_rng(seed)
        worst = float("-inf")
        for _ in range(samples):
            box, _ = sample_noncontextual_box(scenario, rng)
            entropies = entropy_vector(box)
            worst = max(worst, max(evaluate(f, entropies) for f in facets))
        return worst

    def test_triangle_facets_hold(self):
        scenario = ncycle(3)
        assert self.worst_value(scenario, project(scenario).facets, 200, seed=4) <= 1e-9

    @pytest.mark.slow
    @pytest.mark.parametrize("scenario", [ncycle(3), chsh()], ids=["triangle", "chsh"])
    def test_projected_facets_hold(self, scenario):
        facets = project(scenario).facets
        assert self.worst_value(scenario, facets, 10000, seed=8) <= 1e-9


def test_bilocal_orbit_count():
    assert len(bilocal_inequalities()) == 52
