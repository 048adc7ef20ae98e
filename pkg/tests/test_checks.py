"""
Tests for the individual verification checks.
"""
from dataclasses import replace

import numpy as np
import pytest

from ladderlab.exceptions import LatticeError, VerificationError
from ladderlab.models.labels import QuantumNumbers
from ladderlab.models.report import CheckStatus, Metric
from ladderlab.numerics.operators import OperatorChain, Scalar
from ladderlab.numerics.oracle import oracle_state
from ladderlab.verification.checks import (
    check_annihilation,
    check_commutator_table,
    check_eigen_residual,
    check_half_step,
    check_hermiticity,
    check_id,
    check_intertwining,
    check_label_commutators,
    check_ladder_coefficient,
    check_ladder_overlap,
    check_quadratic_point,
    check_refined_identity,
    check_refined_identity_partner,
    check_spectrum,
    eigen_residual,
    operator_grid,
)
from ladderlab.verification.settings import DEFAULT_CHECK_SETTINGS, CheckSettings, Thresholds


def _labels(*points):
    return [QuantumNumbers(n, ell) for n, ell in points]


class TestCheckIds:

    def test_full_id(self, coulomb):
        assert check_id(coulomb, "refined_identity", QuantumNumbers(0, 0), 1) == \
            "coulomb.refined_identity.i1.n0_l0"

    def test_rational_labels(self, coulomb):
        labels = QuantumNumbers("1/2", "-1/2")
        assert check_id(coulomb, "half_step", labels, 2) == "coulomb.half_step.i2.n1/2_l-1/2"

    def test_suffix_only(self, oscillator):
        assert check_id(oscillator, "intertwining", suffix="a.l1") == "oscillator.intertwining.a.l1"


class TestRefinedIdentity:

    def test_oscillator(self, oscillator, oscillator_grid):
        result = check_refined_identity(oscillator, 1, 0, 0, oscillator_grid)
        assert result.passed, result.message
        assert result.value <= 1e-5
        assert result.detail["phi"] == "-1"

    def test_morse(self, morse, morse_grid):
        result = check_refined_identity(morse, 2, 3, 3, morse_grid)
        assert result.passed, result.message
        assert result.threshold == 1e-5

    def test_coulomb_uses_dilation_gate(self, coulomb, coulomb_grid):
        result = check_refined_identity(coulomb, 1, 0, 0, coulomb_grid)
        assert result.threshold == 1e-4
        assert result.passed, result.message

    def test_undefined_point(self, coulomb, coulomb_grid):
        with pytest.raises(LatticeError):
            check_refined_identity(coulomb, 1, "-1/2", 0, coulomb_grid)

    def test_partner_oscillator(self, oscillator, oscillator_grid):
        result = check_refined_identity_partner(oscillator, 1, 1, 1, oscillator_grid)
        assert result.passed, result.message
        assert result.detail["partner_n"] == "0"

    def test_partner_undefined_is_skipped(self, coulomb, coulomb_grid):
        result = check_refined_identity_partner(coulomb, 1, 0, 0, coulomb_grid)
        assert result.status is CheckStatus.SKIPPED
        assert "undefined" in result.message


class TestIntertwining:

    @pytest.mark.parametrize("ell", [0, 3])
    def test_coulomb(self, coulomb, coulomb_grid, ell):
        result = check_intertwining(coulomb, ell, coulomb_grid)
        assert result.passed, result.message
        assert result.check_id.startswith("coulomb.intertwining.l")

    def test_oscillator_variant(self, oscillator, oscillator_grid):
        result = check_intertwining(oscillator, 1, oscillator_grid, "a")
        assert result.check_id == "oscillator.intertwining.a.l1"
        assert result.passed, result.message

    def test_morse(self, morse, morse_grid):
        assert check_intertwining(morse, 2, morse_grid).passed


class TestCommutators:

    def test_oscillator_table(self, oscillator, oscillator_grid):
        results = check_commutator_table(oscillator, oscillator_grid, _labels((2, 0)))
        assert len(results) == 5
        assert [r.check_id for r in results[:4]] == [
            "oscillator.commutator.i1.n2_l0.AB",
            "oscillator.commutator.i2.n2_l0.AB",
            "oscillator.commutator.n2_l0.A1B2",
            "oscillator.commutator.n2_l0.A1A2",
        ]
        assert all(r.passed for r in results), [r.message for r in results if not r.passed]

    def test_coulomb_table(self, coulomb, coulomb_grid):
        results = check_commutator_table(coulomb, coulomb_grid, _labels((1, 0)))
        assert all(r.passed for r in results), [r.message for r in results if not r.passed]

    def test_morse_table_meets_gate(self, morse, morse_grid):
        results = check_commutator_table(morse, morse_grid, _labels((3, 3), (2, 4)))
        assert all(r.passed for r in results), [r.message for r in results if not r.passed]
        assert max(r.value for r in results if r.metric is Metric.RESIDUAL) <= 1e-5

    def test_operator_grid_refinement_per_model(self, oscillator, morse, oscillator_grid, morse_grid):
        assert operator_grid(oscillator, oscillator_grid).count == 2 * (oscillator_grid.count - 1) + 1
        assert operator_grid(morse, morse_grid).count == 32 * (morse_grid.count - 1) + 1
        plain = CheckSettings(model_refine={})
        assert operator_grid(morse, morse_grid, plain).count == 2 * (morse_grid.count - 1) + 1

    @pytest.mark.parametrize("name", ["oscillator", "morse", "coulomb"])
    def test_label_table(self, request, name):
        model = request.getfixturevalue(name)
        result = check_label_commutators(model, _labels((1, 1), (2, 2), (3, 3)))
        assert result.metric is Metric.ABSOLUTE_ERROR
        assert result.value == 0.0
        assert result.passed

    def test_label_table_needs_defined_operators(self, coulomb):
        with pytest.raises(VerificationError):
            check_label_commutators(coulomb, _labels(("-1/2", 0)))


class TestHermiticity:

    def test_oscillator(self, oscillator, oscillator_grid):
        result = check_hermiticity(oscillator, 1, QuantumNumbers(2, 0), oscillator_grid)
        assert result.passed, result.message

    def test_morse_is_skipped(self, morse, morse_grid):
        result = check_hermiticity(morse, 1, QuantumNumbers(2, 2), morse_grid)
        assert result.status is CheckStatus.SKIPPED
        assert "not constant" in result.message


class TestLadderOverlap:

    def test_oscillator(self, oscillator, oscillator_grid):
        result = check_ladder_overlap(oscillator, 1, 0, 0, oscillator_grid)
        assert result.metric is Metric.OVERLAP
        assert result.value >= 0.9999

    def test_coulomb_half_step_gate(self, coulomb, coulomb_grid):
        result = check_ladder_overlap(coulomb, 1, 0, 0, coulomb_grid)
        assert result.threshold == 0.999
        assert result.passed, result.message

    def test_morse_target_without_state(self, morse, morse_grid):
        # A2 at (1, 1) lands on n = 0
        result = check_ladder_overlap(morse, 2, 1, 1, morse_grid)
        assert result.status is CheckStatus.SKIPPED


class TestStates:

    def test_eigen_residual(self, oscillator, oscillator_grid):
        result = check_eigen_residual(oscillator, 2, 0, oscillator_grid)
        assert result.check_id == "oscillator.eigen_residual.n2_l0"
        assert result.passed, result.message

    def test_eigen_residual_reports_oracle_overlap(self, coulomb, coulomb_grid):
        result = check_eigen_residual(coulomb, 1, 0, coulomb_grid)
        assert result.detail["overlap"] >= 0.9999
        assert result.passed, result.message

    def test_eigen_residual_gated_by_overlap(self, oscillator, oscillator_grid):
        settings = replace(DEFAULT_CHECK_SETTINGS, thresholds=Thresholds(ladder_overlap=1.5))
        result = check_eigen_residual(oscillator, 2, 0, oscillator_grid, settings)
        assert result.value <= 1e-4
        assert result.status is CheckStatus.FAILED
        assert "overlap" in result.message

    def test_eigen_residual_sees_the_origin(self, oscillator, oscillator_grid):
        labels = QuantumNumbers(2, 0)
        _, state = oracle_state(oscillator, 2, 0, oscillator_grid)
        assert eigen_residual(oscillator, state, labels) <= 1e-4
        values = state.values.copy()
        values[3] += 1e-3 * np.max(np.abs(values))
        assert eigen_residual(oscillator, state.with_values(values), labels) > 1e-2

    def test_half_step(self, coulomb, coulomb_grid):
        result = check_half_step(coulomb, 1, 0, 0, coulomb_grid)
        assert result.detail["target_n"] == "1/2"
        assert result.passed, result.message

    @pytest.mark.parametrize("name,ell", [("oscillator", 1), ("morse", 2), ("coulomb", 0)])
    def test_annihilation(self, request, name, ell):
        model = request.getfixturevalue(name)
        grid = request.getfixturevalue(f"{name}_grid")
        result = check_annihilation(model, ell, grid)
        assert result.passed, result.message
        assert result.detail["count"] > grid.count // 2

    def test_annihilation_relative_to_state(self, monkeypatch, oscillator, oscillator_grid):
        double = OperatorChain((Scalar(2.0),), "double")
        monkeypatch.setattr(oscillator, "ground_annihilator", lambda ell: double)
        result = check_annihilation(oscillator, 1, oscillator_grid)
        assert result.value == pytest.approx(2.0)
        assert result.status is CheckStatus.FAILED


class TestQuadratic:

    def test_morse_reduction(self, morse, morse_grid):
        result = check_quadratic_point(morse, "raise_l", 2, 2, morse_grid)
        assert result.check_id == "morse.quadratic.n2_l2.raise_l"
        assert result.detail["constant"] == pytest.approx(-1.0)
        assert result.detail["fitted_constant"] == pytest.approx(-1.0, rel=1e-3)
        assert result.passed, result.message

    def test_oscillator_overlap(self, oscillator, oscillator_grid):
        result = check_quadratic_point(oscillator, "energy_preserving", 2, 2, oscillator_grid)
        assert result.metric is Metric.OVERLAP
        assert result.detail["target_l"] == "0"
        assert result.passed, result.message


class TestSpectrum:

    def test_oscillator(self, oscillator, oscillator_grid):
        results = check_spectrum(oscillator, 0, 3, oscillator_grid)
        assert [r.check_id for r in results] == [
            "oscillator.spectrum.n0_l0", "oscillator.spectrum.n2_l0", "oscillator.spectrum.n4_l0",
        ]
        assert all(r.passed for r in results)

    def test_morse_absolute(self, morse, morse_grid):
        results = check_spectrum(morse, 4, 2, morse_grid)
        assert all(r.metric is Metric.ABSOLUTE_ERROR for r in results)
        assert all(r.passed for r in results)

    def test_morse_too_many_levels(self, morse, morse_grid):
        with pytest.raises(LatticeError, match="2 bound state"):
            check_spectrum(morse, 3, 3, morse_grid)

    def test_coulomb_s_channel_uses_critical_gate(self, coulomb, coulomb_grid):
        results = check_spectrum(coulomb, 0, 2, coulomb_grid)
        assert {r.threshold for r in results} == {5e-3}
        assert all(r.passed for r in results)

    def test_coulomb_p_channel(self, coulomb, coulomb_grid):
        results = check_spectrum(coulomb, 1, 2, coulomb_grid)
        assert {r.threshold for r in results} == {1e-4}
        assert all(r.passed for r in results)


class TestLadderCoefficient:

    def test_oscillator_variant(self, oscillator, oscillator_grid):
        result = check_ladder_coefficient(oscillator, 0, 0, oscillator_grid, "a")
        assert result.check_id == "oscillator.ladder_coefficient.n0_l0.a"
        assert result.passed, result.message

    def test_coulomb(self, coulomb, coulomb_grid):
        result = check_ladder_coefficient(coulomb, 0, 1, coulomb_grid)
        assert result.check_id == "coulomb.ladder_coefficient.n1_l0"
        assert result.passed, result.message
