"""
Tests for the hierarchy models and the model factory.
"""
from fractions import Fraction

import numpy as np
import pytest

from ladderlab.exceptions import HierarchyError, LatticeError, ModelNotFoundError
from ladderlab.hierarchies import HierarchyFactory, MorseModel, OscillatorModel
from ladderlab.models.labels import QuantumNumbers
from ladderlab.numerics.grid import inner_product, norm
from ladderlab.numerics.operators import Dilation, Scalar

HALF = Fraction(1, 2)


def labels(*pairs):
    return {QuantumNumbers(n, ell) for n, ell in pairs}


class TestFactory:

    def test_registered_models(self):
        assert HierarchyFactory.list_models() == ["oscillator", "morse", "coulomb"]
        assert HierarchyFactory.is_registered("morse")
        assert not HierarchyFactory.is_registered("hydrogen")

    def test_unknown_model(self):
        with pytest.raises(ModelNotFoundError) as info:
            HierarchyFactory.create_model("hydrogen")
        assert info.value.model_name == "hydrogen"
        assert "oscillator" in str(info.value)

    def test_unknown_option(self):
        with pytest.raises(HierarchyError, match="Invalid configuration"):
            HierarchyFactory.create_model("oscillator", {"alpha": 2.0})

    @pytest.mark.parametrize("alpha", [0.0, -1.0, float("nan")])
    def test_morse_alpha_must_be_positive(self, alpha):
        with pytest.raises(HierarchyError, match="alpha"):
            HierarchyFactory.create_model("morse", {"alpha": alpha})

    def test_instances_are_cached(self):
        first = HierarchyFactory.get_or_create_model("morse", {"alpha": 2.0})
        second = HierarchyFactory.get_or_create_model("morse", {"alpha": 2.0})
        assert first is second
        assert isinstance(first, MorseModel)
        assert first.alpha == 2.0

    def test_clear_cache(self):
        first = HierarchyFactory.get_or_create_model("oscillator")
        HierarchyFactory.clear_cache()
        assert HierarchyFactory.get_or_create_model("oscillator") is not first
        assert isinstance(first, OscillatorModel)


class TestPotentials:

    def test_oscillator(self, oscillator):
        assert oscillator.potential(0, 1.0) == pytest.approx(0.75)

    def test_morse(self, morse):
        assert morse.potential(0, 0.0) == pytest.approx(-0.25)

    def test_coulomb(self, coulomb):
        assert coulomb.potential(1, 2.0) == pytest.approx(-0.8125)

    def test_array_input(self, oscillator):
        values = oscillator.potential(1, np.array([1.0, 2.0]))
        np.testing.assert_allclose(values, [1.75, 4.0 + 0.75 / 4.0])

    def test_half_line_rejects_origin(self, coulomb):
        with pytest.raises(HierarchyError, match="x > 0"):
            coulomb.potential(0, np.array([0.0, 1.0]))


class TestSpectra:

    def test_energies(self, oscillator, coulomb):
        assert oscillator.energy(0, 0) == 2.0
        assert coulomb.energy(1, 0) == pytest.approx(-4.0 / 9.0)
        assert coulomb.energy(HALF, HALF) == pytest.approx(-1.0)
        assert HierarchyFactory.create_model("morse", {"alpha": 2.0}).energy(3, 3) == pytest.approx(-9.0)

    def test_coulomb_energy_undefined(self, coulomb):
        with pytest.raises(LatticeError):
            coulomb.energy(-HALF)

    def test_lattices(self, oscillator, morse, coulomb):
        assert oscillator.lattice(2) == labels((0, 0), (1, 1), (2, 0), (2, 2))
        assert morse.lattice(3) == labels((1, 1), (1, 3), (2, 2), (3, 3))
        assert coulomb.lattice(1) == labels((0, 0), (1, 0), (1, 1))

    def test_lattice_points_are_physical(self, oscillator, morse, coulomb):
        for model in (oscillator, morse, coulomb):
            assert all(model.is_physical(point) for point in model.lattice(4))

    def test_off_lattice(self, oscillator, morse, coulomb):
        assert not oscillator.is_physical(QuantumNumbers(2, 1))
        assert not morse.is_physical(QuantumNumbers(0, 2))
        assert not coulomb.is_physical(QuantumNumbers(HALF, HALF))

    def test_level_labels(self, oscillator, morse, coulomb):
        assert oscillator.level_label(1, 2) == QuantumNumbers(5, 1)
        assert morse.level_label(5, 2) == QuantumNumbers(1, 5)
        assert coulomb.level_label(HALF, 1) == QuantumNumbers(Fraction(3, 2), HALF)

    def test_level_index(self, oscillator, coulomb):
        assert oscillator.level_index(QuantumNumbers(4, 0)) == 2
        assert coulomb.level_index(QuantumNumbers(HALF, HALF)) == 0
        with pytest.raises(LatticeError):
            oscillator.level_index(QuantumNumbers(2, 1))

    def test_morse_bound_states(self, morse):
        assert [morse.bound_state_count(ell) for ell in (0, 1, 4, 5)] == [0, 1, 2, 3]
        with pytest.raises(LatticeError):
            morse.level_label(5, 3)
        with pytest.raises(LatticeError, match="normalizable"):
            morse.level_index(QuantumNumbers(0, 2))

    def test_channels(self, oscillator, morse, coulomb):
        assert oscillator.attractive_core(0)
        assert not oscillator.attractive_core(1)
        assert not coulomb.attractive_core(HALF)
        assert not morse.attractive_core(0)
        assert coulomb.critical_channel(0)
        assert not oscillator.critical_channel(0)


class TestRefinedPairs:

    def test_oscillator_pair(self, oscillator):
        pair = oscillator.refined_pair(1, 0, 0)
        assert pair.phi == -1
        assert pair.step == QuantumNumbers(1, 1)
        assert oscillator.refined_pair(2, 2, 2).step == QuantumNumbers(3, 1)

    def test_morse_pair(self, morse):
        pair = morse.refined_pair(2, 3, 3)
        assert pair.phi == -1
        assert pair.step == QuantumNumbers(2, 4)
        assert morse.refined_pair(1, 3, 3).phi == -4

    def test_coulomb_pair(self, coulomb):
        pair = coulomb.refined_pair(1, 0, 0)
        assert pair.phi == -1
        assert pair.step == QuantumNumbers(HALF, HALF)
        assert coulomb.dilation_factor(0) == 2
        assert pair.A.atoms[0] == Dilation(0.5)
        assert pair.B.atoms[-1] == Dilation(2.0)
        assert isinstance(pair.A.atoms[1], Scalar)
        assert pair.A.stretch == 2.0

    def test_coulomb_second_pair(self, coulomb):
        pair = coulomb.refined_pair(2, 2, 1)
        assert pair.phi == -2
        assert pair.step == QuantumNumbers(Fraction(5, 2), HALF)

    def test_invalid_index(self, oscillator):
        with pytest.raises(HierarchyError, match="Pair index"):
            oscillator.refined_pair(3, 0, 0)

    def test_h_factors(self, oscillator, morse, coulomb):
        assert np.all(oscillator.h_factor(3, 1)(np.array([0.5, 2.0])) == -0.25)
        assert morse.h_factor(1, 1)(0.0) == pytest.approx(-1.0)
        assert coulomb.h_factor(1, 0)(2.0) == pytest.approx(-1.5)


class TestFreeOperators:

    def test_a_moves_to_step(self, oscillator):
        move = oscillator.free_operator(1, "A", QuantumNumbers(0, 0))
        assert move.target == QuantumNumbers(1, 1)
        assert move.chain.name == "A1_0,0"

    def test_b_uses_preimage(self, oscillator):
        move = oscillator.free_operator(1, "B", QuantumNumbers(2, 2))
        assert move.target == QuantumNumbers(1, 1)
        assert move.chain.name == "B1_1,1"

    def test_coulomb_partner_undefined(self, coulomb):
        with pytest.raises(LatticeError, match="n > -1/2"):
            coulomb.free_operator(1, "B", QuantumNumbers(0, 0))

    def test_unknown_kind(self, oscillator):
        with pytest.raises(HierarchyError, match="kind"):
            oscillator.free_operator(1, "C", QuantumNumbers(0, 0))


class TestQuadraticPairs:

    def test_oscillator_raise_n(self, oscillator):
        quadratic = oscillator.quadratic_pair("raise_n", 0, 0)
        assert quadratic.target == QuantumNumbers(2, 0)
        assert quadratic.chain.name == "A2A1"
        assert len(quadratic.chain.atoms) == 2

    def test_oscillator_energy_preserving(self, oscillator):
        quadratic = oscillator.quadratic_pair("energy_preserving", 2, 2)
        assert quadratic.target == QuantumNumbers(2, 0)
        assert oscillator.energy(2, 0) == oscillator.energy(2, 2)

    def test_morse_raise_l(self, morse):
        quadratic = morse.quadratic_pair("raise_l", 2, 2)
        assert quadratic.target == QuantumNumbers(2, 4)
        chain, scale = morse.quadratic_reduction("raise_l", quadratic.source)
        assert scale == pytest.approx(-1.0)
        assert chain.name == "Xminus_1"

    def test_coulomb_lower_l(self, coulomb):
        quadratic = coulomb.quadratic_pair("lower_l", 2, 1)
        assert quadratic.target == QuantumNumbers(2, 0)
        _, scale = coulomb.quadratic_reduction("lower_l", quadratic.source)
        assert scale == pytest.approx(-5.0 / 4.0)

    def test_no_reduction(self, oscillator):
        assert oscillator.quadratic_reduction("raise_n", QuantumNumbers(0, 0)) is None

    def test_unknown_kind(self, morse):
        with pytest.raises(HierarchyError, match="Quadratic kind"):
            morse.quadratic_pair("sideways", 1, 1)


class TestConventional:

    def test_constants(self, oscillator, morse, coulomb):
        assert coulomb.conventional(0).q == pytest.approx(-4.0)
        assert morse.conventional(2).q == pytest.approx(9.0)
        assert oscillator.conventional(1, "a").q == pytest.approx(2.0)
        assert oscillator.conventional(1, "b").q == pytest.approx(-6.0)

    def test_morse_label_map(self, morse):
        conventional = morse.conventional(2)
        assert conventional.hierarchy_ell == 4
        assert conventional.partner_ell == 6
        assert conventional.image(QuantumNumbers(2, 4)) == QuantumNumbers(2, 6)

    def test_coulomb_offset(self, coulomb):
        conventional = coulomb.conventional(0)
        assert conventional.offset == pytest.approx(4.0)
        assert conventional.predicted_coefficient(coulomb.energy(1)) == pytest.approx(
            np.sqrt(4.0 - 4.0 / 9.0)
        )

    def test_oscillator_variants(self, oscillator):
        a = oscillator.conventional(0)
        assert a.variant == "a"
        assert a.image(QuantumNumbers(0, 0)) == QuantumNumbers(1, 1)
        b = oscillator.conventional(0, "b")
        assert b.image(QuantumNumbers(2, 0)) == QuantumNumbers(1, 1)
        assert b.predicted_coefficient(oscillator.energy(0)) == 0.0

    def test_unknown_variant(self, oscillator, morse):
        with pytest.raises(HierarchyError):
            oscillator.conventional(0, "c")
        with pytest.raises(HierarchyError):
            morse.conventional(1, "a")

    def test_coulomb_undefined_label(self, coulomb):
        with pytest.raises(LatticeError):
            coulomb.conventional(-HALF)


class TestClosedForms:

    def test_oscillator_ground(self, oscillator, oscillator_grid):
        r = oscillator_grid.points
        state = oscillator.analytic_state(0, 0, oscillator_grid)
        expected = np.sqrt(2.0 * r) * np.exp(-r ** 2 / 2.0)
        np.testing.assert_allclose(state.values, expected, atol=1e-5)

    def test_coulomb_ground(self, coulomb, coulomb_grid):
        r = coulomb_grid.points
        values = coulomb.ground_values(0, r)
        np.testing.assert_allclose(values, np.sqrt(r) * np.exp(-2.0 * r))

    def test_morse_ground(self, morse, morse_grid):
        x = morse_grid.points
        values = morse.ground_values(1, x)
        np.testing.assert_allclose(values, np.exp(x / 2.0) * np.exp(-np.exp(x) / 2.0))

    def test_morse_needs_positive_label(self, morse, morse_grid):
        with pytest.raises(LatticeError):
            morse.ground_values(0, morse_grid.points)

    def test_ground_is_eigenstate(self, oscillator, oscillator_grid):
        state = oscillator.analytic_state(0, 0, oscillator_grid)
        window = oscillator_grid.interior()
        residual = oscillator.hamiltonian_apply(0, state, shift=-2.0)
        assert norm(residual, window) / (2.0 * norm(state, window)) <= 1e-4

    def test_annihilators(self, oscillator, coulomb, morse, oscillator_grid, coulomb_grid, morse_grid):
        from ladderlab.numerics.operators import apply

        for model, ell, grid in ((oscillator, 2, oscillator_grid), (coulomb, 1, coulomb_grid),
                                 (morse, 3, morse_grid)):
            state = model.analytic_state(*model.ground_label(ell).as_tuple(), grid)
            image = apply(model.ground_annihilator(ell), state)
            window = grid.interior()
            assert image.sup_norm(window) <= 1e-3 * state.sup_norm(window)

    def test_excited_states_orthogonal(self, coulomb, coulomb_grid):
        first = coulomb.analytic_state(1, 1, coulomb_grid)
        second = coulomb.analytic_state(2, 1, coulomb_grid)
        assert abs(inner_product(first, second)) <= 1e-6

    def test_analytic_state_off_lattice(self, oscillator, oscillator_grid):
        with pytest.raises(LatticeError):
            oscillator.analytic_state(1, 0, oscillator_grid)


class TestCanonicalPaths:

    def test_oscillator(self, oscillator):
        start, moves = oscillator.canonical_path(QuantumNumbers(3, 1))
        assert start == QuantumNumbers(0, 0)
        assert moves == [(1, "A"), (1, "A"), (2, "A")]

    def test_morse(self, morse):
        start, moves = morse.canonical_path(QuantumNumbers(1, 3))
        assert start == QuantumNumbers(3, 3)
        assert moves == [(1, "B"), (2, "A")]

    def test_coulomb(self, coulomb):
        start, moves = coulomb.canonical_path(QuantumNumbers(2, 1))
        assert start == QuantumNumbers(2, 2)
        assert moves == [(2, "A"), (1, "B")]
