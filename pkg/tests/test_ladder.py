"""
Tests for the ladder engine.
"""
import numpy as np
import pytest

from ladderlab.exceptions import LadderError, LatticeError
from ladderlab.hierarchies import FreeMove
from ladderlab.ladder import (
    LadderPath,
    apply_move,
    apply_to_state,
    build_state,
    canonical_path,
    ground_state,
    ladder_coefficient,
    walk,
)
from ladderlab.models.labels import QuantumNumbers
from ladderlab.numerics.grid import build_grid, inner_product, norm
from ladderlab.numerics.operators import OperatorChain, Scalar
from ladderlab.numerics.oracle import oracle_state
from ladderlab.verification.checks import eigen_residual


class TestGroundStates:

    def test_oscillator(self, oscillator, oscillator_grid):
        state = ground_state(oscillator, 0, oscillator_grid)
        assert state.labels == QuantumNumbers(0, 0)
        assert norm(state) == pytest.approx(1.0)
        assert eigen_residual(oscillator, state, state.labels) <= 1e-4

    def test_coulomb(self, coulomb, coulomb_grid):
        state = ground_state(coulomb, 0, coulomb_grid)
        r = coulomb_grid.points
        peak = int(np.argmax(state.values))
        # r^{1/2} e^{-2r} peaks at r = 1/4
        assert r[peak] == pytest.approx(0.25, abs=coulomb_grid.spacing)
        assert coulomb.energy(*state.labels.as_tuple()) == pytest.approx(-4.0)

    def test_morse(self, morse, morse_grid):
        state = ground_state(morse, 1, morse_grid)
        assert state.labels == QuantumNumbers(1, 1)
        assert morse.energy(1) == pytest.approx(-0.25)
        x = morse_grid.points
        assert x[int(np.argmax(state.values))] == pytest.approx(0.0, abs=morse_grid.spacing)

    def test_morse_without_bound_states(self, morse, morse_grid):
        with pytest.raises(LatticeError):
            ground_state(morse, 0, morse_grid)

    def test_wrong_domain(self, morse, oscillator_grid):
        from ladderlab.exceptions import HierarchyError

        with pytest.raises(HierarchyError, match="full_line"):
            ground_state(morse, 1, oscillator_grid)


class TestPaths:

    def test_plan(self, oscillator):
        path = LadderPath.plan(oscillator, QuantumNumbers(0, 0), [(1, "A"), (2, "A")])
        assert path.end == QuantumNumbers(2, 0)
        assert len(path) == 2
        assert path.labels(oscillator) == [
            QuantumNumbers(0, 0), QuantumNumbers(1, 1), QuantumNumbers(2, 0)
        ]
        assert str(path) == "(0,0) -> (2,0): A1 A2"

    def test_plan_leaving_definable_range(self, coulomb):
        with pytest.raises(LatticeError):
            LadderPath.plan(coulomb, QuantumNumbers(0, 0), [(1, "B")])

    def test_empty_path(self, coulomb):
        path = canonical_path(coulomb, 1, 1)
        assert len(path) == 0
        assert path.start == path.end == QuantumNumbers(1, 1)
        assert str(path) == "(1,1) -> (1,1): (none)"

    def test_canonical_paths_end_on_target(self, oscillator, morse, coulomb):
        for model in (oscillator, morse, coulomb):
            for point in model.lattice(4):
                assert canonical_path(model, point.n, point.ell).end == point

    def test_off_lattice(self, oscillator, morse):
        with pytest.raises(LatticeError):
            canonical_path(oscillator, 3, 0)
        with pytest.raises(LatticeError):
            canonical_path(morse, 0, 2)


class TestBuildState:

    def test_empty_path_returns_ground_state(self, coulomb, coulomb_grid):
        built = build_state(coulomb, 1, 1, coulomb_grid)
        ground = ground_state(coulomb, 1, coulomb_grid)
        np.testing.assert_allclose(built.values, ground.values)

    @pytest.mark.parametrize("n, ell", [(2, 0), (3, 1), (4, 2)])
    def test_oscillator_states(self, oscillator, oscillator_grid, n, ell):
        state = build_state(oscillator, n, ell, oscillator_grid)
        assert state.labels == QuantumNumbers(n, ell)
        assert state.model == "oscillator"
        assert eigen_residual(oscillator, state, state.labels) <= 1e-4

    def test_oscillator_matches_closed_form(self, oscillator, oscillator_grid):
        built = build_state(oscillator, 4, 0, oscillator_grid)
        exact = oscillator.analytic_state(4, 0, oscillator_grid)
        assert inner_product(built, exact) >= 0.9999

    def test_path_independence(self, oscillator, oscillator_grid):
        start = ground_state(oscillator, 0, oscillator_grid)
        origin = QuantumNumbers(0, 0)
        first = walk(oscillator, LadderPath.plan(oscillator, origin, [(1, "A"), (2, "A")]), start)
        # A2 first passes through l = -1, the mirror of H^1
        second = walk(oscillator, LadderPath.plan(oscillator, origin, [(2, "A"), (1, "A")]), start)
        assert first.labels == second.labels == QuantumNumbers(2, 0)
        assert abs(inner_product(first, second)) >= 0.99999

    def test_morse_state(self, morse, morse_grid):
        state = build_state(morse, 1, 3, morse_grid)
        assert eigen_residual(morse, state, state.labels) <= 1e-4
        _, target = oracle_state(morse, 1, 3, morse_grid)
        assert abs(inner_product(state, target)) >= 0.9999

    def test_coulomb_state(self, coulomb, coulomb_grid):
        state = build_state(coulomb, 2, 1, coulomb_grid)
        exact = coulomb.analytic_state(2, 1, coulomb_grid)
        assert abs(inner_product(state, exact)) >= 0.9999

    @pytest.mark.parametrize("name, n, ell", [
        ("oscillator", 2, 0),
        ("oscillator", 3, 1),
        ("oscillator", 4, 2),
        ("morse", 1, 3),
        ("morse", 2, 4),
        ("morse", 1, 5),
        ("coulomb", 1, 0),
        ("coulomb", 2, 0),
        ("coulomb", 2, 1),
    ])
    def test_built_state_matches_oracle_on_full_grid(self, request, name, n, ell):
        model = request.getfixturevalue(name)
        grid = request.getfixturevalue(f"{name}_grid")
        state = build_state(model, n, ell, grid)
        _, target = oracle_state(model, n, ell, grid)
        assert abs(inner_product(state, target)) >= 0.9999
        assert eigen_residual(model, state, state.labels) <= 1e-4

    def test_morse_residual_shrinks_under_refinement(self, morse):
        residuals = []
        for count in (4001, 8001):
            grid = build_grid("full_line", -12.0, 6.0, count)
            state = build_state(morse, 1, 5, grid)
            residuals.append(eigen_residual(morse, state, state.labels))
        assert residuals[1] <= residuals[0] <= 1e-4

    def test_off_lattice(self, oscillator, oscillator_grid):
        with pytest.raises(LatticeError):
            build_state(oscillator, 1, 0, oscillator_grid)


class TestMoves:

    def test_apply_to_state_is_regular_at_origin(self, oscillator, oscillator_grid):
        state = ground_state(oscillator, 0, oscillator_grid)
        image = apply_to_state(oscillator, oscillator.refined_pair(1, 0, 0).A, state, 1)
        exact = oscillator.analytic_state(1, 1, oscillator_grid)
        scaled = image.values / np.sqrt(inner_product(image, image))
        sign = np.sign(inner_product(image, exact))
        # r^{3/2} behaviour down to the first samples, no spike next to r = 0
        np.testing.assert_allclose(sign * scaled[:20], exact.values[:20], atol=1e-7)
        assert abs(inner_product(image, exact)) / norm(image) >= 0.99999

    def test_apply_to_state_full_line(self, morse, morse_grid):
        state = ground_state(morse, 2, morse_grid)
        image = apply_to_state(morse, morse.refined_pair(1, 2, 2).A, state, 2)
        assert image.values[0] != 0.0 or image.values[1] != 0.0

    def test_apply_to_state_needs_labels(self, oscillator, oscillator_grid):
        state = ground_state(oscillator, 0, oscillator_grid)
        with pytest.raises(LadderError, match="labelled"):
            apply_to_state(oscillator, oscillator.refined_pair(1, 0, 0).A, state.labelled(None, None), 1)

    def test_annihilated_move(self, oscillator, oscillator_grid):
        state = ground_state(oscillator, 0, oscillator_grid)
        source = QuantumNumbers(0, 0)
        move = FreeMove(1, "A", source, QuantumNumbers(1, 1), OperatorChain((Scalar(0.0),), "zero"))
        with pytest.raises(LadderError, match="annihilates"):
            apply_move(oscillator, move, state)

    def test_walk_labels_result(self, oscillator, oscillator_grid):
        path = LadderPath.plan(oscillator, QuantumNumbers(0, 0), [(1, "A")])
        state = walk(oscillator, path, ground_state(oscillator, 0, oscillator_grid))
        assert state.labels == QuantumNumbers(1, 1)
        assert norm(state) == pytest.approx(1.0)


class TestLadderCoefficients:

    def test_coulomb_ground_is_annihilated(self, coulomb, coulomb_grid):
        coefficient = ladder_coefficient(coulomb, 0, 0, coulomb_grid)
        assert coefficient.proportionality is None
        assert coefficient.predicted == 0.0
        assert abs(coefficient.value) <= 1e-6 * 4.0

    def test_coulomb_excited(self, coulomb, coulomb_grid):
        coefficient = ladder_coefficient(coulomb, 0, 1, coulomb_grid)
        assert coefficient.source == QuantumNumbers(1, 0)
        assert coefficient.target == QuantumNumbers(1, 1)
        assert abs(coefficient.value) == pytest.approx(np.sqrt(32.0) / 3.0, rel=1e-3)
        assert coefficient.relative_error <= 1e-3

    def test_oscillator_variant_a(self, oscillator, oscillator_grid):
        coefficient = ladder_coefficient(oscillator, 0, 0, oscillator_grid, "a")
        assert coefficient.target == QuantumNumbers(1, 1)
        assert abs(coefficient.value) == pytest.approx(2.0, rel=1e-3)
        assert coefficient.proportionality >= 0.999

    def test_morse(self, morse, morse_grid):
        coefficient = ladder_coefficient(morse, 1, 2, morse_grid)
        assert coefficient.source == QuantumNumbers(2, 2)
        assert coefficient.target == QuantumNumbers(2, 4)
        assert coefficient.relative_error <= 1e-3
