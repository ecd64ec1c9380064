"""Tests for quantum boxes, the small-angle expansion and the optimizer."""

import importlib
from types import SimpleNamespace

import numpy as np
import pytest

from entropic.boxes import check_bilocal_marginal, chsh, chsh_entropic, klyachko_k5
from entropic.exceptions import ParameterError
from entropic.quantum import (
    bilocal_quantum_box,
    chained_objective,
    chained_quantum_box,
    chsh_entropic_objective,
    chsh_quantum_box,
    horodecki_chsh,
    klyachko_quantum_box,
    klyachko_vectors,
    maximize,
    optimization_target,
    optimize_target,
    plane_observable,
    smallphi_expansion_check,
    tsirelson_angles,
    two_detector_threshold,
    two_qubit_state,
)


class TestQuantumBoxes:
    def test_tsirelson_point(self):
        box = chsh_quantum_box(np.pi / 4, tsirelson_angles())
        assert chsh(box) == pytest.approx(2 * np.sqrt(2))
        assert horodecki_chsh(np.pi / 4) == pytest.approx(2 * np.sqrt(2))
        # maximal CHSH does not violate the entropic form
        assert chsh_entropic(box) < 0

    def test_state_range(self):
        with pytest.raises(ParameterError):
            two_qubit_state(0.0)

    def test_angle_count(self):
        with pytest.raises(ParameterError):
            chsh_quantum_box(np.pi / 4, [0.0, 0.1, 0.2])

    def test_plane_observable_is_valid(self):
        assert plane_observable(0.7).is_valid()

    def test_chained_box_shape(self):
        box = chained_quantum_box(0.5, 3, np.linspace(0, 1, 6))
        assert box.scenario.name == "chained:3"
        assert len(box.tables) == 6
        assert not box.validate()

    def test_klyachko_vectors_orthogonal(self):
        vectors = klyachko_vectors(0.4, 1.1)
        for i in range(5):
            assert np.linalg.norm(vectors[i]) == pytest.approx(1.0)
            assert np.dot(vectors[i], vectors[(i + 1) % 5]) == pytest.approx(0.0, abs=1e-12)

    def test_klyachko_box_exclusive_clicks(self):
        box = klyachko_quantum_box(0.3, 0.4, 0.5)
        for table in box.tables.values():
            assert table[1, 1] == pytest.approx(0.0, abs=1e-12)
        # quantum value of the correlator sum stays above -5
        assert klyachko_k5(box) > -5

    def test_klyachko_degenerate(self):
        with pytest.raises(ParameterError):
            klyachko_vectors(0.0, 0.0)

    def test_entanglement_swapping_box(self):
        box = bilocal_quantum_box(
            np.pi / 4, 0.0, np.pi / 4, 0.0,
            [(0.0, 0.0), (np.pi / 2, 0.0)],
            [(np.pi / 4, 0.0), (-np.pi / 4, 0.0)],
        )
        assert box.scenario.cardinalities["B"] == 4
        assert not box.validate()
        assert check_bilocal_marginal(box)


class TestExpansion:
    def test_corrected_ratio(self):
        check = smallphi_expansion_check(1e-3)
        assert check.lhs > 0
        assert 0.99 <= check.corrected_ratio <= 1.01
        assert check.table_error < 1e-6

    def test_plain_ratio_approaches_one(self):
        coarse = smallphi_expansion_check(1e-3)
        fine = smallphi_expansion_check(1e-7)
        assert coarse.ratio < fine.ratio < 1.0

    def test_phi_range(self):
        with pytest.raises(ParameterError):
            smallphi_expansion_check(0.5)


class TestOptimizer:
    @staticmethod
    def parabola(point: np.ndarray) -> float:
        return float(-(point[0] - 0.3) ** 2 - (point[1] + 0.2) ** 2)

    def test_maximize_finds_peak(self):
        report = maximize(self.parabola, [(-1, 1), (-1, 1)], restarts=3, seed=1, workers=1)
        assert report.best_params == pytest.approx([0.3, -0.2], abs=1e-3)
        assert report.best_value == pytest.approx(0.0, abs=1e-6)
        assert report.restarts == 3

    def test_worker_count_does_not_change_result(self):
        serial = maximize(self.parabola, [(-1, 1), (-1, 1)], restarts=4, seed=9, workers=1)
        parallel = maximize(self.parabola, [(-1, 1), (-1, 1)], restarts=4, seed=9, workers=3)
        assert serial.best_params == parallel.best_params
        assert serial.evaluations == parallel.evaluations

    def test_bad_bounds(self):
        with pytest.raises(ParameterError):
            maximize(self.parabola, [(-np.inf, 1), (0, 1)], restarts=1)
        with pytest.raises(ParameterError):
            maximize(self.parabola, [(0, 1), (0, 1)], restarts=0)

    def test_targets(self):
        assert len(optimization_target("chained:3").bounds) == 7
        assert optimization_target("chsh_e_full").parameter_names[0] == "alpha"
        for name in ("bogus", "chained:1", "chained:x"):
            with pytest.raises(ParameterError):
                optimization_target(name)

    def test_chained_two_is_chsh(self):
        point = np.array([0.6, 0.1, 1.2, -0.4, 0.9])
        assert chained_objective(2)(point) == pytest.approx(chsh_entropic_objective()(point))

    def test_threshold_bracket(self):
        with pytest.raises(ParameterError):
            two_detector_threshold((1.0, 0.9))

    def test_threshold_uses_configured_restarts(self, monkeypatch):
        seen = []

        def fake_maximize(objective, bounds, *, restarts=None, seed=None, workers=None, target=""):
            seen.append(restarts)
            eta = float(target.partition("=")[2])
            return SimpleNamespace(best_value=eta - 0.995)

        optimizer = importlib.import_module("entropic.quantum.optimize")
        monkeypatch.setattr(optimizer, "maximize", fake_maximize)
        result = two_detector_threshold((0.98, 1.0), tolerance=1e-3)
        assert result.threshold == pytest.approx(0.995, abs=1e-3)
        assert seen
        assert all(restarts is None for restarts in seen)

    @pytest.mark.slow
    def test_chsh_entropic_optimum(self):
        report = optimize_target("chsh_e", restarts=20, seed=0)
        assert report.best_value == pytest.approx(0.237, abs=0.005)

    @pytest.mark.slow
    def test_klyachko_entropic_optimum(self):
        report = optimize_target("klyachko_e", restarts=20, seed=0)
        assert report.best_value == pytest.approx(0.091, abs=0.005)

    @pytest.mark.slow
    def test_two_detector_threshold(self):
        result = two_detector_threshold((0.98, 1.0), tolerance=1e-3, restarts=10, seed=0)
        assert result.threshold == pytest.approx(0.995, abs=0.004)
