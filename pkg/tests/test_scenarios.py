"""Tests for marginal scenarios, loaders and symmetry groups."""

import json

import pytest

from entropic.exceptions import ScenarioError
from entropic.scenarios import (
    MarginalScenario,
    apply_permutation,
    bell,
    bilocality,
    builtin_scenario,
    chained,
    chsh,
    dump_scenario,
    klyachko,
    load_scenario,
    ncycle,
    symmetries,
)


class TestConstruction:
    def test_down_closure(self):
        scenario = ncycle(3)
        assert len(scenario.contexts) == 6
        assert scenario.is_context(("X1", "X2"))
        assert not scenario.is_context(("X1", "X2", "X3"))

    def test_maximal_contexts_in_fixed_order(self):
        assert [sorted(c) for c in chsh().maximal_contexts] == [
            ["A0", "B0"], ["A0", "B1"], ["A1", "B0"], ["A1", "B1"],
        ]

    def test_unknown_observable(self):
        with pytest.raises(ScenarioError):
            MarginalScenario.create(["X"], [("X", "Y")])

    def test_uncovered_observable(self):
        with pytest.raises(ScenarioError):
            MarginalScenario.create(["X", "Y", "Z"], [("X", "Y")])

    def test_small_cardinality(self):
        with pytest.raises(ScenarioError):
            MarginalScenario.create(["X", "Y"], [("X", "Y")], {"X": 1})

    def test_overlapping_independence(self):
        with pytest.raises(ScenarioError):
            MarginalScenario.create(["X", "Y"], [("X", "Y")], independences=[(("X",), ("X", "Y"))])

    def test_ncycle_bounds(self):
        with pytest.raises(ScenarioError):
            ncycle(2)

    def test_bell_shape(self):
        scenario = bell(3, 2, 3)
        assert scenario.n == 6
        assert len(scenario.maximal_contexts) == 8
        assert set(scenario.cardinalities.values()) == {3}

    def test_bilocality(self):
        scenario = bilocality()
        assert scenario.observables == ("A0", "A1", "B", "C0", "C1")
        assert len(scenario.maximal_contexts) == 4
        assert scenario.independences == (
            (frozenset({"A0", "A1"}), frozenset({"C0", "C1"})),
        )
        assert bilocality(4).cardinalities["B"] == 4


class TestCycleOrder:
    def test_ncycle(self):
        assert ncycle(5).cycle_order() == ("X1", "X2", "X3", "X4", "X5")

    def test_bipartite_interleaved(self):
        assert chsh().cycle_order() == ("A0", "B0", "A1", "B1")

    def test_chained(self):
        scenario = chained(3)
        assert scenario.cycle_order() == ("A0", "B0", "A1", "B1", "A2", "B2")
        assert len(scenario.maximal_contexts) == 6
        assert scenario.is_context(("B2", "A0"))

    def test_chained_two_is_chsh(self):
        assert chained(2) == chsh()

    def test_not_a_cycle(self):
        with pytest.raises(ScenarioError):
            bilocality().cycle_order()


class TestBuiltins:
    @pytest.mark.parametrize(
        "name, observables",
        [("ncycle:4", 4), ("chsh", 4), ("klyachko", 5), ("bell:2,3,2", 6),
         ("bilocality", 5), ("chained:4", 8)],
    )
    def test_parse(self, name, observables):
        assert builtin_scenario(name).n == observables

    @pytest.mark.parametrize("name", ["pentagon", "ncycle:x", "bell:2,2", "chsh:3"])
    def test_unknown(self, name):
        with pytest.raises(ScenarioError):
            builtin_scenario(name)


class TestFiles:
    def test_json_round_trip(self, tmp_path):
        path = tmp_path / "bilocality.json"
        dump_scenario(bilocality(), path)
        assert load_scenario(path) == bilocality()

    def test_yaml_round_trip(self, tmp_path):
        path = tmp_path / "klyachko.yaml"
        dump_scenario(klyachko(), path)
        assert load_scenario(path) == klyachko()

    def test_missing_field(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"observables": ["X"]}))
        with pytest.raises(ScenarioError):
            load_scenario(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError):
            load_scenario(tmp_path / "nope.json")


class TestSymmetries:
    @pytest.mark.parametrize(
        "scenario, order", [(chsh(), 8), (ncycle(5), 10), (bilocality(), 8), (ncycle(3), 6)]
    )
    def test_group_order(self, scenario, order):
        group = symmetries(scenario)
        assert group.order == order
        assert group.is_closed()

    def test_identity_first(self):
        group = symmetries(chsh())
        assert group.elements[0] == {name: name for name in chsh().observables}

    def test_bilocality_fixes_b(self):
        for element in symmetries(bilocality()):
            assert element["B"] == "B"

    def test_apply_permutation(self):
        assert apply_permutation(("A0", "B"), {"A0": "C1", "B": "B"}) == frozenset({"C1", "B"})
