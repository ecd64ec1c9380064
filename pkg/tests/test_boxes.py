"""Tests for boxes: the marginal model, named families, expressions and detector models."""

from fractions import Fraction

import numpy as np
import pytest

from entropic.boxes import (
    NAMED_BOXES,
    MarginalModel,
    bilocal_inequalities,
    bilocal_row,
    bipartite_box,
    builtin_box,
    check_bilocal_marginal,
    chsh,
    chsh_entropic,
    chsh_max,
    chsh_variants,
    classical_box,
    correlator,
    dfamily_box,
    dump_box,
    entropy_vector,
    is_noncontextual,
    isotropic_box,
    klyachko_k5,
    load_box,
    mix,
    nb_box,
    nb_conditional_box,
    ncycle_entropic,
    pmax_box,
    pr_box,
    prd_box,
    relabel_outcomes,
    sample_bilocal_box,
    sample_noncontextual_box,
    sample_nosignaling_chsh_box,
    single_detector,
    single_detector_entropies,
    triangle_box,
    two_detector,
    two_detector_entropies,
    white_box,
)
from entropic.entropy import binary_entropy, evaluate
from entropic.exceptions import InvalidBoxError, ParameterError, ScenarioShapeError
from entropic.scenarios import bilocality
from entropic.scenarios import chsh as chsh_scenario
from entropic.scenarios import ncycle

TOLERANCE = 1e-9


class TestMarginalModel:
    def test_exact_tables(self):
        box = pr_box()
        assert box.is_exact
        assert box.probability({"A0": 0, "B0": 0}) == Fraction(1, 2)
        assert list(box.marginal(("A1",))) == [Fraction(1, 2), Fraction(1, 2)]

    def test_missing_context(self):
        with pytest.raises(InvalidBoxError) as info:
            MarginalModel.create(chsh_scenario(), {"A0,B0": np.full((2, 2), 0.25)})
        assert len(info.value.violations) == 3

    def test_signaling_box_rejected(self):
        # A0's outcome follows Bob's setting
        with pytest.raises(InvalidBoxError, match="marginal"):
            bipartite_box(2, lambda a, b, x, y: Fraction(1, 2) if a == y else 0)

    def test_negative_probability_rejected(self):
        table = np.array([[0.75, 0.5], [-0.25, 0.0]])
        tables = {c: table for c in ("A0,B0", "A0,B1", "A1,B0", "A1,B1")}
        with pytest.raises(InvalidBoxError, match="negative"):
            MarginalModel.create(chsh_scenario(), tables)

    def test_validate_can_be_skipped(self):
        table = np.array([[1.0, 0.0], [0.0, 0.5]])
        tables = {c: table for c in ("A0,B0", "A0,B1", "A1,B0", "A1,B1")}
        box = MarginalModel.create(chsh_scenario(), tables, validate=False)
        assert box.validate()

    def test_mix_needs_matching_weights(self):
        with pytest.raises(ValueError):
            mix([pr_box(), classical_box()], [Fraction(1)])

    def test_mix_stays_exact(self):
        box = mix([pr_box(), classical_box()], [Fraction(1, 2), Fraction(1, 2)])
        assert box.is_exact
        assert chsh(box) == pytest.approx(3.0)

    def test_relabel_outcomes(self):
        flipped = relabel_outcomes(classical_box(), "A0", [1, 0])
        assert correlator(flipped, "A0", "B0") == pytest.approx(-1.0)
        assert correlator(flipped, "A1", "B0") == pytest.approx(1.0)
        with pytest.raises(ValueError):
            relabel_outcomes(classical_box(), "A0", [0, 0])

    def test_dump_and_load_json(self, tmp_path):
        path = tmp_path / "pr.json"
        path.write_text(dump_box(pr_box()), encoding="utf-8")
        loaded = load_box(path)
        assert loaded.is_exact
        for context, table in pr_box().tables.items():
            assert np.array_equal(loaded.tables[context], table)

    def test_load_yaml_with_builtin_scenario(self, tmp_path):
        lines = ["scenario: chsh", "tables:"]
        for context in ("A0,B0", "A0,B1", "A1,B0", "A1,B1"):
            lines.append(f'  "{context}": {{"0,0": "1/2", "1,1": "1/2"}}')
        path = tmp_path / "classical.yaml"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        box = load_box(path)
        assert box.is_exact
        assert chsh(box) == pytest.approx(2.0)

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(InvalidBoxError, match="not found"):
            load_box(tmp_path / "absent.json")


class TestFamilies:
    def test_pr_box(self):
        box = pr_box()
        assert chsh(box) == pytest.approx(4.0)
        assert max(chsh_variants(box)) == pytest.approx(4.0)
        # every mutual information is one bit, so the entropic form is saturated
        assert chsh_entropic(box) == pytest.approx(0.0, abs=TOLERANCE)

    def test_pmax_violates_entropic_chsh(self):
        assert chsh_entropic(pmax_box()) == pytest.approx(1.0)
        assert chsh(pmax_box()) == pytest.approx(3.0)

    def test_isotropic_closed_form(self):
        for c in (Fraction(1, 5), Fraction(4, 5), Fraction(1)):
            box = isotropic_box(c)
            assert chsh(box) == pytest.approx(4 * float(c))
            expected = -2 * binary_entropy((1 + float(c)) / 2)
            assert chsh_entropic(box) == pytest.approx(expected, abs=TOLERANCE)
            assert chsh_entropic(box) <= TOLERANCE

    def test_isotropic_range(self):
        with pytest.raises(ParameterError):
            isotropic_box(Fraction(3, 2))

    def test_triangle_corners(self):
        assert chsh(triangle_box(1, 0)) == pytest.approx(4.0)
        assert chsh(triangle_box(0, 1)) == pytest.approx(2.0)
        assert chsh(triangle_box(0, 0)) == pytest.approx(2.0)

    @pytest.mark.parametrize("gamma, xi", [("3/5", "1/2"), ("-1/10", "1/2"), ("1/2", "-1/10")])
    def test_triangle_range(self, gamma, xi):
        with pytest.raises(ParameterError):
            triangle_box(gamma, xi)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_dfamily_entropic_value(self, d):
        xi = Fraction(1, 3)
        assert chsh_entropic(dfamily_box(xi, d)) == pytest.approx(binary_entropy(1 / 3))

    def test_prd_is_normalized(self):
        box = prd_box(3)
        assert box.scenario.cardinalities["A0"] == 3
        assert sum(box.marginal(("A1", "B1")).flat) == 1

    def test_bad_dimension(self):
        with pytest.raises(ParameterError):
            prd_box(1)

    def test_white_box(self):
        assert chsh(white_box()) == pytest.approx(0.0)

    def test_builtin_box(self):
        assert chsh(builtin_box("iso:0.8")) == pytest.approx(3.2)
        assert builtin_box("dfamily:1/2,3").scenario.cardinalities["B1"] == 3
        assert set(NAMED_BOXES) >= {"pr", "pmax", "iso", "triangle", "dfamily", "nb"}

    @pytest.mark.parametrize("spec", ["nope", "iso", "iso:0.5,0.5", "iso:abc"])
    def test_builtin_box_errors(self, spec):
        with pytest.raises(ParameterError):
            builtin_box(spec)


class TestBilocalityBoxes:
    def test_nb_marginal_is_white(self):
        box = nb_box(Fraction(1, 2), Fraction(1, 4))
        assert box.scenario.name == "bilocality"
        assert check_bilocal_marginal(box)

    def test_nb_range(self):
        with pytest.raises(ParameterError):
            nb_box(Fraction(3, 4), Fraction(1, 2))

    def test_conditional_box(self):
        assert chsh(nb_conditional_box(1, 0, 0)) == pytest.approx(4.0)
        assert chsh(nb_conditional_box(1, 0, 1)) == pytest.approx(-4.0)
        assert chsh_max(nb_conditional_box(1, 0, 1)) == pytest.approx(4.0)
        with pytest.raises(ParameterError):
            nb_conditional_box(1, 0, 2)

    def test_sampled_bilocal_boxes_satisfy_every_row(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            box = sample_bilocal_box(rng)
            assert check_bilocal_marginal(box)
            entropies = entropy_vector(box)
            for k in range(1, 11):
                assert bilocal_row(box, k, entropies) <= TOLERANCE

    def test_bilocal_row_needs_bilocality(self):
        with pytest.raises(ScenarioShapeError):
            bilocal_row(pr_box(), 7)


class TestNoncontextuality:
    def test_pr_box_is_contextual(self):
        result = is_noncontextual(pr_box())
        assert not result
        assert result.exact

    def test_classical_box_has_certificate(self):
        box = classical_box()
        result = is_noncontextual(box)
        assert result
        assert result.certificate.reproduces(box, tolerance=0)

    def test_float_boxes_use_highs(self):
        assert not is_noncontextual(pr_box().to_float())
        assert is_noncontextual(isotropic_box(Fraction(1, 4)).to_float())

    def test_sampled_chsh_boxes_never_violate(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            box, certificate = sample_noncontextual_box(chsh_scenario(), rng)
            assert certificate.reproduces(box)
            assert chsh_max(box) <= 2 + TOLERANCE
            assert chsh_entropic(box) <= TOLERANCE

    def test_sampled_ncycle_boxes_never_violate(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            box, _ = sample_noncontextual_box(ncycle(5), rng)
            assert klyachko_k5(box) >= -3 - TOLERANCE
            entropies = entropy_vector(box)
            for i in range(1, 6):
                assert ncycle_entropic(box, i, entropies) <= TOLERANCE

    def test_nosignaling_samples_are_valid(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            box = sample_nosignaling_chsh_box(rng)
            assert not box.validate()
            assert chsh_max(box) <= 4 + TOLERANCE
            assert bool(is_noncontextual(box)) == (chsh_max(box) <= 2 + 1e-7)

    def test_nosignaling_entropic_bound(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            box = sample_nosignaling_chsh_box(rng)
            value = chsh_entropic(box)
            assert value <= 1 + TOLERANCE
            if value > TOLERANCE:
                assert not is_noncontextual(box)

    @pytest.mark.slow
    def test_nosignaling_entropic_bound_full(self):
        rng = np.random.default_rng(17)
        for _ in range(1000):
            box = sample_nosignaling_chsh_box(rng)
            value = chsh_entropic(box)
            assert value <= 1 + TOLERANCE
            if value > TOLERANCE:
                assert not is_noncontextual(box)

    @pytest.mark.slow
    def test_noncontextual_samples_full(self):
        rng = np.random.default_rng(19)
        for _ in range(1000):
            box, _ = sample_noncontextual_box(chsh_scenario(), rng)
            assert chsh_entropic(box) <= TOLERANCE
            pentagon, _ = sample_noncontextual_box(ncycle(5), rng)
            entropies = entropy_vector(pentagon)
            for i in range(1, 6):
                assert ncycle_entropic(pentagon, i, entropies) <= TOLERANCE

    @pytest.mark.slow
    def test_bilocal_samples_full(self):
        rng = np.random.default_rng(23)
        inequalities = bilocal_inequalities()
        for _ in range(1000):
            entropies = entropy_vector(sample_bilocal_box(rng))
            assert max(evaluate(ineq, entropies) for ineq in inequalities) <= TOLERANCE

    def test_sampling_is_seeded(self):
        first, _ = sample_noncontextual_box(bilocality(), np.random.default_rng(1))
        second, _ = sample_noncontextual_box(bilocality(), np.random.default_rng(1))
        for context in first.tables:
            assert np.allclose(first.tables[context], second.tables[context])


class TestDetectors:
    @pytest.mark.parametrize("eta", [0.6, 0.85, 1.0])
    def test_single_detector_closed_form(self, eta):
        box = pmax_box()
        direct = entropy_vector(single_detector(box, eta))
        closed = single_detector_entropies(entropy_vector(box), eta)
        assert set(direct.values) == set(closed.values)
        for subset, value in closed.values.items():
            assert direct[subset] == pytest.approx(value, abs=TOLERANCE)

    def test_single_detector_scales_violation(self):
        eta = 0.7
        entropies = single_detector_entropies(entropy_vector(pmax_box()), eta)
        value = chsh_entropic(pmax_box(), entropies)
        assert value == pytest.approx(eta * 1.0)

    @pytest.mark.parametrize("eta", [0.6, 0.9])
    def test_two_detector_closed_form(self, eta):
        box = isotropic_box(Fraction(9, 10))
        direct = entropy_vector(two_detector(box, eta))
        closed = two_detector_entropies(entropy_vector(box), eta)
        for subset, value in closed.values.items():
            assert direct[subset] == pytest.approx(value, abs=TOLERANCE)

    def test_exact_efficiency_keeps_box_exact(self):
        box = single_detector(pr_box(), Fraction(1, 2))
        assert box.is_exact
        assert box.scenario.name == "bell:2,2,2+noclick"
        assert box.probability({"A0": 2, "B0": 2}) == Fraction(1, 2)

    def test_efficiency_range(self):
        with pytest.raises(ParameterError):
            single_detector(pr_box(), 1.5)

    def test_pairwise_contexts_only(self):
        with pytest.raises(ScenarioShapeError):
            two_detector(nb_box(Fraction(1, 2), 0), 0.9)
