"""
Quantitative checks of the factorization identities.

Each check measures one identity on a grid and returns ``CheckResult``
objects. Numerical failures inside a check propagate as ``LadderLabError``
subclasses; the suite runner turns them into errored results.

Operator-level identities run on the grid refined by
``CheckSettings.operator_refine``; checks on closed-form states run on a
grid fitted to the state's support and refined by
``CheckSettings.annihilation_refine``.
"""
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from ..exceptions import LadderError, LatticeError, VerificationError
from ..hierarchies.base import PAIR_INDICES, HierarchyModel
from ..ladder import apply_to_state, build_state, ground_state, ladder_coefficient
from ..models.labels import QuantumNumbers, Rational, as_fraction, format_rational
from ..models.report import CheckResult, CheckStatus, Metric
from ..numerics.grid import Grid, Wavefunction, build_grid, inner_product, norm, normalize
from ..numerics.operators import (
    Dilation,
    OperatorChain,
    apply,
    commutator_apply,
    gaussian_test_functions,
    max_stretch,
)
from ..numerics.oracle import assemble, lowest_eigenpairs, oracle_state
from ..utils.logger import get_logger
from .settings import DEFAULT_CHECK_SETTINGS, RHS_FLOOR, CheckSettings

logger = get_logger(__name__)

# samples below this fraction of the peak are outside a state's support
SUPPORT_CUTOFF = 1e-10

Residual = Tuple[Wavefunction, Wavefunction]


# ----------------------------------------------------------------------
# helpers

def check_id(
    model: HierarchyModel,
    family: str,
    labels: Optional[QuantumNumbers] = None,
    pair: Optional[int] = None,
    suffix: Optional[str] = None
) -> str:
    """Sortable check identifier, e.g. ``coulomb.refined_identity.i1.n0_l0``."""
    parts = [model.name, family]
    if pair is not None:
        parts.append(f"i{pair}")
    if labels is not None:
        parts.append(f"n{format_rational(labels.n)}_l{format_rational(labels.ell)}")
    if suffix:
        parts.append(suffix)
    return ".".join(parts)


def operator_grid(
    model: HierarchyModel,
    grid: Grid,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> Grid:
    """Grid with the model's operator refinement (``refine_for``) on the same interval."""
    return grid.with_count(settings.refine_for(model.name) * (grid.count - 1) + 1)


def support_grid(state: Wavefunction, refine: int) -> Grid:
    """
    Grid covering the support of ``state`` with ``refine`` times finer spacing.

    The support is where |ψ| exceeds ``SUPPORT_CUTOFF`` times its peak.
    """
    grid = state.grid
    magnitude = np.abs(state.values)
    inside = np.nonzero(magnitude > SUPPORT_CUTOFF * magnitude.max())[0]
    lo = max(int(inside[0]) - 1, 0)
    hi = min(int(inside[-1]) + 1, grid.count - 1)
    count = max(refine * (hi - lo) + 1, grid.count)
    return build_grid(grid.domain_kind, grid.points[lo], grid.points[hi], count)


def has_dilation(chains: Iterable[OperatorChain]) -> bool:
    return any(isinstance(atom, Dilation) for chain in chains for atom in chain.atoms)


def _test_functions(
    grid: Grid,
    chains: Sequence[OperatorChain],
    settings: CheckSettings
) -> List[Wavefunction]:
    functions = gaussian_test_functions(
        grid, settings.test_functions, settings.kernel, max_stretch(chains)
    )
    window = grid.interior(settings.kernel.window_fraction)
    for f in functions:
        if norm(f, window) < RHS_FLOOR:
            raise VerificationError("Degenerate test function: zero norm inside the window")
    return functions


def _difference(f: Wavefunction, g: Wavefunction) -> Wavefunction:
    return f.with_values(f.values - g.values)


def _scaled(f: Wavefunction, factor) -> Wavefunction:
    return f.with_values(factor * f.values)


def _windowed_dot(f: Wavefunction, g: Wavefunction, window: slice) -> float:
    return float(trapezoid(f.values[window] * g.values[window], dx=f.grid.spacing))


def _residual_result(
    check: str,
    model: HierarchyModel,
    labels: Optional[QuantumNumbers],
    pair: Optional[int],
    residuals: Sequence[Residual],
    window: slice,
    threshold: float,
    settings: CheckSettings,
    detail: Optional[dict] = None
) -> CheckResult:
    """
    Largest interior residual ‖lhs − rhs‖ / ‖rhs‖ over (lhs, rhs) pairs.

    Falls back to the absolute residual, gated by ``absolute_fallback``,
    when a right-hand side vanishes.
    """
    errors = [norm(_difference(lhs, rhs), window) for lhs, rhs in residuals]
    scales = [norm(rhs, window) for _, rhs in residuals]

    if min(scales) < RHS_FLOOR:
        value = max(errors)
        metric = Metric.ABSOLUTE_RESIDUAL
        threshold = settings.thresholds.absolute_fallback
    else:
        value = max(error / scale for error, scale in zip(errors, scales))
        metric = Metric.RESIDUAL

    result = CheckResult.measured(check, model.name, labels, pair, metric, value, threshold, detail)
    logger.debug(f"{check}: {metric.value}={value:.3e} (threshold {threshold:.1e})")
    return result


def _overlap_result(
    check: str,
    model: HierarchyModel,
    labels: QuantumNumbers,
    pair: Optional[int],
    image: Wavefunction,
    target: Wavefunction,
    threshold: float,
    detail: Optional[dict] = None
) -> CheckResult:
    overlap = abs(inner_product(normalize(image), target))
    logger.debug(f"{check}: overlap={overlap:.8f}")
    return CheckResult.measured(
        check, model.name, labels, pair, Metric.OVERLAP, overlap, threshold, detail
    )


def _target_detail(target: QuantumNumbers) -> dict:
    return {"target_n": format_rational(target.n), "target_l": format_rational(target.ell)}


# ----------------------------------------------------------------------
# refined factorization identities

def check_refined_identity(
    model: HierarchyModel,
    i: int,
    n: Rational,
    ell: Rational,
    grid: Grid,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> CheckResult:
    """
    Residual of (B^i A^i − φ^i) f = h (H^l − E_n) f on Gaussian test functions.

    Raises:
        LatticeError: If the operators are undefined at (n, l)
        VerificationError: On a degenerate test function
    """
    model.check_grid(grid)
    pair = model.refined_pair(i, n, ell)
    labels = pair.labels
    fine = operator_grid(model, grid, settings)
    energy = model.energy(labels.n, labels.ell)
    h = model.h_factor(labels.n, labels.ell)(fine.points)
    phi = float(pair.phi)
    kernel = settings.kernel

    residuals = []
    for f in _test_functions(fine, (pair.A, pair.B), settings):
        product = apply(pair.B, apply(pair.A, f, kernel), kernel)
        lhs = _difference(product, _scaled(f, phi))
        rhs = _scaled(model.hamiltonian_apply(labels.ell, f, -energy), h)
        residuals.append((lhs, rhs))

    dilated = has_dilation((pair.A, pair.B))
    thresholds = settings.thresholds
    threshold = thresholds.refined_identity_dilation if dilated else thresholds.refined_identity
    return _residual_result(
        check_id(model, "refined_identity", labels, i),
        model, labels, i, residuals,
        fine.interior(kernel.window_fraction), threshold, settings,
        {"phi": format_rational(pair.phi), "count": fine.count},
    )


def check_refined_identity_partner(
    model: HierarchyModel,
    i: int,
    n: Rational,
    ell: Rational,
    grid: Grid,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> CheckResult:
    """
    Residual of the reversed product (A^i B^i − φ^i) at the preimage label.

    With (ñ, l̃) the label A^i maps onto (n, l), A_ñ B_ñ − φ(ñ, l̃) equals
    h_{n,l} (H^l − E_n). Points whose preimage has no operators are skipped.
    """
    model.check_grid(grid)
    labels = QuantumNumbers(n, ell)
    check = check_id(model, "refined_identity_partner", labels, i)
    thresholds = settings.thresholds
    origin = model.step_inverse(i, labels)
    try:
        pair = model.refined_pair(i, origin.n, origin.ell)
    except LatticeError as e:
        logger.debug(f"{check}: skipped ({e})")
        return CheckResult.skipped(
            check, model.name, labels, i, Metric.RESIDUAL,
            thresholds.refined_identity_dilation, f"partner label {origin} undefined: {e}",
        )

    fine = operator_grid(model, grid, settings)
    energy = model.energy(labels.n, labels.ell)
    h = model.h_factor(labels.n, labels.ell)(fine.points)
    phi = float(pair.phi)
    kernel = settings.kernel

    residuals = []
    for f in _test_functions(fine, (pair.A, pair.B), settings):
        product = apply(pair.A, apply(pair.B, f, kernel), kernel)
        lhs = _difference(product, _scaled(f, phi))
        rhs = _scaled(model.hamiltonian_apply(labels.ell, f, -energy), h)
        residuals.append((lhs, rhs))

    dilated = has_dilation((pair.A, pair.B))
    threshold = thresholds.refined_identity_dilation if dilated else thresholds.refined_identity
    return _residual_result(
        check, model, labels, i, residuals,
        fine.interior(kernel.window_fraction), threshold, settings,
        {"partner_n": format_rational(origin.n), "partner_l": format_rational(origin.ell)},
    )


def check_intertwining(
    model: HierarchyModel,
    ell: Rational,
    grid: Grid,
    variant: Optional[str] = None,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> CheckResult:
    """
    Residual of (H + offset) X⁺ f = X⁺ (H' + offset') f.

    H is the hierarchy of X⁺X⁻ and H' that of X⁻X⁺; the offsets make
    the shifted hierarchies (oscillator H_x, H_z) exact.
    """
    model.check_grid(grid)
    conventional = model.conventional(ell, variant)
    fine = operator_grid(model, grid, settings)
    kernel = settings.kernel
    x_plus = conventional.x_plus

    residuals = []
    for f in _test_functions(fine, (x_plus,), settings):
        lhs = model.hamiltonian_apply(
            conventional.hierarchy_ell, apply(x_plus, f, kernel), conventional.offset
        )
        rhs = apply(
            x_plus,
            model.hamiltonian_apply(conventional.partner_ell, f, conventional.partner_offset),
            kernel,
        )
        residuals.append((lhs, rhs))

    label = format_rational(conventional.label)
    suffix = f"l{label}" if conventional.variant == "default" else f"{conventional.variant}.l{label}"
    return _residual_result(
        check_id(model, "intertwining", suffix=suffix),
        model, None, None, residuals,
        fine.interior(kernel.window_fraction), settings.thresholds.intertwining, settings,
        {"l": label, "variant": conventional.variant, "q": conventional.q},
    )


# ----------------------------------------------------------------------
# commutators

def _commutator_threshold(chains: Iterable[OperatorChain], settings: CheckSettings) -> float:
    thresholds = settings.thresholds
    return thresholds.commutator_dilation if has_dilation(chains) else thresholds.commutator


def check_identity_commutator(
    model: HierarchyModel,
    i: int,
    labels: QuantumNumbers,
    grid: Grid,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> CheckResult:
    """
    [A^i, B^i] f = f for free-index operators acting on the state at ``labels``.

    A^i B^i uses the pair at the preimage label, B^i A^i the pair at ``labels``.
    """
    model.check_grid(grid)
    origin = model.step_inverse(i, labels)
    inner = model.refined_pair(i, origin.n, origin.ell)
    here = model.refined_pair(i, labels.n, labels.ell)
    chains = (inner.A, inner.B, here.A, here.B)
    fine = operator_grid(model, grid, settings)
    kernel = settings.kernel

    residuals = []
    for f in _test_functions(fine, chains, settings):
        lhs = commutator_apply(inner.A, inner.B, f, kernel, p_first=here.A, q_second=here.B)
        residuals.append((lhs, f))

    return _residual_result(
        check_id(model, "commutator", labels, i, "AB"),
        model, labels, i, residuals,
        fine.interior(kernel.window_fraction), _commutator_threshold(chains, settings), settings,
    )


def check_cross_commutator(
    model: HierarchyModel,
    kind: str,
    labels: QuantumNumbers,
    grid: Grid,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> CheckResult:
    """
    [A¹, B²] or [A¹, A²] vanish: both orderings give the same image.

    Args:
        kind: "B" for [A¹, B²], "A" for [A¹, A²]
    """
    model.check_grid(grid)
    first = model.free_operator(2, kind, labels)
    then_a1 = model.free_operator(1, "A", first.target)
    a1 = model.free_operator(1, "A", labels)
    then_second = model.free_operator(2, kind, a1.target)
    if then_a1.target != then_second.target:
        raise VerificationError(
            f"Orderings of A1 and {kind}2 at {labels} end at different labels "
            f"({then_a1.target} vs {then_second.target})"
        )

    chains = (first.chain, then_a1.chain, a1.chain, then_second.chain)
    fine = operator_grid(model, grid, settings)
    kernel = settings.kernel

    residuals = []
    for f in _test_functions(fine, chains, settings):
        forward = apply(then_a1.chain, apply(first.chain, f, kernel), kernel)
        backward = apply(then_second.chain, apply(a1.chain, f, kernel), kernel)
        residuals.append((forward, backward))

    return _residual_result(
        check_id(model, "commutator", labels, None, f"A1{kind}2"),
        model, labels, None, residuals,
        fine.interior(kernel.window_fraction), _commutator_threshold(chains, settings), settings,
    )


def check_label_commutators(
    model: HierarchyModel,
    labels: Sequence[QuantumNumbers]
) -> CheckResult:
    """
    Label bookkeeping of the free-index operators.

    For every label and pair: B^i shifts (n, l) by the [N, B^i], [L, B^i]
    table, A^i by the opposite amount, A^i undoes B^i, and
    φ(ñ, l̃) − φ(n, l) = 1 as [A^i, B^i] = 1 requires. The value is the
    number of mismatches; labels whose operators are undefined are skipped.
    """
    mismatches = []
    visited = 0
    for point in labels:
        for i in PAIR_INDICES:
            dn, dl = model.LABEL_COMMUTATORS[i]
            try:
                lower = model.free_operator(i, "B", point)
                upper = model.free_operator(i, "A", point)
                back = model.free_operator(i, "A", lower.target)
            except LatticeError:
                continue
            visited += 1
            if lower.target != point.shifted(dn, dl):
                mismatches.append(f"B{i} at {point} -> {lower.target}")
            if upper.target != point.shifted(-dn, -dl):
                mismatches.append(f"A{i} at {point} -> {upper.target}")
            if back.target != point:
                mismatches.append(f"A{i}B{i} at {point} -> {back.target}")
            if model.phi(i, lower.target) - model.phi(i, point) != 1:
                mismatches.append(f"phi{i} at {point}")

    if visited == 0:
        raise VerificationError(f"No label in {list(map(str, labels))} has defined operators")
    for mismatch in mismatches:
        logger.error(f"{model.name} label commutator mismatch: {mismatch}")

    return CheckResult.measured(
        check_id(model, "label_commutators"),
        model.name, None, None, Metric.ABSOLUTE_ERROR, float(len(mismatches)), 0.0,
        {"labels": visited, "mismatches": mismatches},
    )


def check_commutator_table(
    model: HierarchyModel,
    grid: Grid,
    labels: Sequence[QuantumNumbers],
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> List[CheckResult]:
    """[A^i, B^i] = 1, vanishing cross commutators and the label table at every label."""
    model.check_grid(grid)
    results = []
    for point in labels:
        for i in PAIR_INDICES:
            results.append(check_identity_commutator(model, i, point, grid, settings))
        for kind in ("B", "A"):
            results.append(check_cross_commutator(model, kind, point, grid, settings))
    results.append(check_label_commutators(model, labels))
    return results


def check_hermiticity(
    model: HierarchyModel,
    i: int,
    labels: QuantumNumbers,
    grid: Grid,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> CheckResult:
    """
    (A^i)† = −B^i: ⟨A f, g⟩ + ⟨f, B g⟩ vanishes for test functions f, g.

    Holds only when h_{n,l} is constant; other points are skipped.
    """
    model.check_grid(grid)
    check = check_id(model, "hermiticity", labels, i)
    if not has_constant_h(model, labels, grid):
        return CheckResult.skipped(
            check, model.name, labels, i, Metric.RESIDUAL, settings.thresholds.hermiticity,
            "h_{n,l} is not constant",
        )
    pair = model.refined_pair(i, labels.n, labels.ell)
    functions = _test_functions(grid, (pair.A, pair.B), settings)
    kernel = settings.kernel

    worst = 0.0
    for f, g in zip(functions, functions[1:] + functions[:1]):
        af = apply(pair.A, f, kernel)
        bg = apply(pair.B, g, kernel)
        gap = abs(inner_product(af, g) + inner_product(f, bg))
        worst = max(worst, gap / (norm(af) * norm(g)))

    logger.debug(f"{check}: {worst:.3e}")
    return CheckResult.measured(
        check, model.name, labels, i, Metric.RESIDUAL, worst, settings.thresholds.hermiticity
    )


def has_constant_h(model: HierarchyModel, labels: QuantumNumbers, grid: Grid) -> bool:
    values = np.asarray(model.h_factor(labels.n, labels.ell)(grid.points), dtype=float)
    return bool(np.ptp(values) == 0.0)


# ----------------------------------------------------------------------
# ladder action on states

def check_ladder_overlap(
    model: HierarchyModel,
    i: int,
    n: Rational,
    ell: Rational,
    grid: Grid,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> CheckResult:
    """
    Overlap of the normalized image A^i ψ_n^l with the oracle state at step_i(n, l).

    Skipped when A^i annihilates the state with φ = 0, and when the
    target label carries no normalizable state (Morse n = 0).

    Raises:
        LadderError: If the image vanishes although φ ≠ 0
    """
    model.check_grid(grid)
    labels = QuantumNumbers(n, ell)
    pair = model.refined_pair(i, labels.n, labels.ell)
    target_labels = pair.step
    thresholds = settings.thresholds
    threshold = (
        thresholds.ladder_overlap if target_labels.is_integral
        else thresholds.ladder_overlap_half_step
    )
    check = check_id(model, "ladder_overlap", labels, i)

    source = build_state(model, labels.n, labels.ell, grid, settings.kernel)
    image = apply_to_state(model, pair.A, source, target_labels.ell, settings.kernel)
    window = grid.interior(settings.kernel.window_fraction)
    ratio = norm(image, window) / norm(source, window)

    if ratio < thresholds.annihilation:
        if pair.phi == 0:
            return CheckResult.skipped(
                check, model.name, labels, i, Metric.OVERLAP, threshold,
                f"A{i} annihilates {labels} (phi = 0)",
            )
        raise LadderError(f"A{i} annihilates {labels} although phi = {pair.phi}")

    try:
        model.level_index(target_labels)
    except LatticeError as e:
        logger.warning(f"{check}: target {target_labels} skipped: {e}")
        return CheckResult.skipped(check, model.name, labels, i, Metric.OVERLAP, threshold, str(e))

    _, target = oracle_state(
        model, target_labels.n, target_labels.ell, grid, settings.eigen_tol
    )
    return _overlap_result(
        check, model, labels, i, image, target, threshold, _target_detail(target_labels)
    )


def eigen_residual(
    model: HierarchyModel,
    state: Wavefunction,
    labels: QuantumNumbers
) -> float:
    """
    Residual ‖(T − E) ψ‖ / ‖E ψ‖ with T the oracle stencil of H^l.

    Every row of T counts; only the two grid endpoints, which T reads as
    boundary values, and a closed origin cell of the flux form are left out.

    Args:
        model: Hierarchy model
        state: State on a grid in the model domain
        labels: (n, l) the state is claimed to carry
    """
    energy = model.energy(labels.n, labels.ell)
    operator = assemble(model, labels.ell, state.grid)
    rows = operator.residual_rows
    samples = state.values[1:-1][rows]
    residual = operator.matvec(state.values)[rows] - energy * samples

    spacing = state.grid.spacing
    error = float(np.sqrt(np.sum(residual ** 2) * spacing))
    scale = abs(energy) * float(np.sqrt(np.sum(samples ** 2) * spacing))
    if scale < RHS_FLOOR:
        return error
    return error / scale


def check_eigen_residual(
    model: HierarchyModel,
    n: Rational,
    ell: Rational,
    grid: Grid,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> CheckResult:
    """
    Eigen-residual of the ladder-built state ψ_n^l.

    The check also fails when the state's overlap with the oracle
    eigenvector on the whole grid falls below ``ladder_overlap``; the
    overlap is reported in the detail.
    """
    labels = QuantumNumbers(n, ell)
    state = build_state(model, labels.n, labels.ell, grid, settings.kernel)
    value = eigen_residual(model, state, labels)
    _, oracle = oracle_state(model, labels.n, labels.ell, grid, settings.eigen_tol)
    overlap = abs(inner_product(state, oracle))

    check = check_id(model, "eigen_residual", labels)
    thresholds = settings.thresholds
    logger.debug(f"{check}: {value:.3e}, oracle overlap {overlap:.8f}")
    result = CheckResult.measured(
        check, model.name, labels, None, Metric.RESIDUAL, value,
        thresholds.eigen_residual, {"overlap": overlap},
    )
    if overlap < thresholds.ladder_overlap:
        result.status = CheckStatus.FAILED
        result.message = (
            f"overlap with the oracle state {overlap:.8f} is below {thresholds.ladder_overlap}"
        )
    return result


def check_half_step(
    model: HierarchyModel,
    i: int,
    n: Rational,
    ell: Rational,
    grid: Grid,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> CheckResult:
    """
    The image A^i ψ_n^l is an eigenfunction of H at the step label.

    For Coulomb this validates half-integer channels without the oracle
    eigenvector.
    """
    labels = QuantumNumbers(n, ell)
    pair = model.refined_pair(i, labels.n, labels.ell)
    source = build_state(model, labels.n, labels.ell, grid, settings.kernel)
    image = normalize(apply_to_state(model, pair.A, source, pair.step.ell, settings.kernel))
    value = eigen_residual(model, image, pair.step)
    check = check_id(model, "half_step", labels, i)
    logger.debug(f"{check}: {value:.3e}")
    return CheckResult.measured(
        check, model.name, labels, i, Metric.RESIDUAL, value,
        settings.thresholds.eigen_residual, _target_detail(pair.step),
    )


def check_annihilation(
    model: HierarchyModel,
    ell: Rational,
    grid: Grid,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> CheckResult:
    """
    Relative sup-norm ‖X ψ_0‖∞ / ‖ψ_0‖∞ of the designated annihilator on the
    closed-form ground state of H^l, both taken over the interior window.
    """
    model.check_grid(grid)
    coarse = ground_state(model, ell, grid)
    fitted = support_grid(coarse, settings.annihilation_refine)
    state = ground_state(model, ell, fitted)
    image = apply(model.ground_annihilator(ell), state, settings.kernel)

    window = fitted.interior(settings.kernel.window_fraction)
    value = image.sup_norm(window) / state.sup_norm(window)

    check = check_id(model, "annihilation", state.labels)
    logger.debug(f"{check}: {value:.3e} on {fitted.count} points")
    return CheckResult.measured(
        check, model.name, state.labels, None, Metric.RESIDUAL, value,
        settings.thresholds.annihilation, {"count": fitted.count},
    )


# ----------------------------------------------------------------------
# quadratic operators

def check_quadratic_point(
    model: HierarchyModel,
    kind: str,
    n: Rational,
    ell: Rational,
    grid: Grid,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> CheckResult:
    """
    Quadratic operator on the closed-form eigenstate ψ_n^l.

    Where the model identifies the operator with a conventional one
    (Q ψ = λ X ψ) the residual is measured and the least-squares λ
    reported; otherwise the image is compared with the oracle target by
    overlap.
    """
    model.check_grid(grid)
    labels = QuantumNumbers(n, ell)
    quadratic = model.quadratic_pair(kind, labels.n, labels.ell)
    reduction = model.quadratic_reduction(kind, labels)
    check = check_id(model, "quadratic", labels, None, kind)
    kernel = settings.kernel

    if reduction is None:
        state = model.analytic_state(labels.n, labels.ell, grid)
        image = apply_to_state(model, quadratic.chain, state, quadratic.target.ell, kernel)
        target = quadratic.target
        _, oracle = oracle_state(model, target.n, target.ell, grid, settings.eigen_tol)
        return _overlap_result(
            check, model, labels, None, image, oracle,
            settings.thresholds.ladder_overlap, _target_detail(target),
        )

    conventional, constant = reduction
    fitted = support_grid(model.analytic_state(labels.n, labels.ell, grid), settings.annihilation_refine)
    state = model.analytic_state(labels.n, labels.ell, fitted)
    lhs = apply(quadratic.chain, state, kernel)
    closed = apply(conventional, state, kernel)
    window = fitted.interior(kernel.window_fraction)

    fitted_constant = _windowed_dot(lhs, closed, window) / _windowed_dot(closed, closed, window)
    return _residual_result(
        check, model, labels, None, [(lhs, _scaled(closed, constant))],
        window, settings.thresholds.quadratic_reduction, settings,
        {
            "operator": quadratic.chain.name,
            "conventional": conventional.name,
            "constant": constant,
            "fitted_constant": fitted_constant,
            **_target_detail(quadratic.target),
        },
    )


def check_quadratic_reduction(
    model: HierarchyModel,
    grid: Grid,
    points: Sequence[Tuple[str, Rational, Rational]],
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> List[CheckResult]:
    """Quadratic checks at (kind, n, l) points."""
    return [check_quadratic_point(model, kind, n, ell, grid, settings) for kind, n, ell in points]


# ----------------------------------------------------------------------
# spectra and coefficients

def check_spectrum(
    model: HierarchyModel,
    ell: Rational,
    k: int,
    grid: Grid,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> List[CheckResult]:
    """
    Compare the k lowest oracle eigenvalues of H^l with the level formula.

    Raises:
        LatticeError: If k exceeds the number of bound states (Morse)
    """
    count = model.bound_state_count(ell)
    if count is not None and k > count:
        raise LatticeError(
            f"{model.name} H^{format_rational(as_fraction(ell))} has "
            f"{count} bound state(s), {k} requested"
        )

    thresholds = settings.thresholds
    pairs = lowest_eigenpairs(assemble(model, ell, grid), k, settings.eigen_tol)
    results = []
    for level, (eigenvalue, _) in enumerate(pairs):
        labels = model.level_label(ell, level)
        formula = model.energy(labels.n, labels.ell)
        error = abs(eigenvalue - formula)
        if model.ABSOLUTE_SPECTRUM:
            metric, value, threshold = Metric.ABSOLUTE_ERROR, error, thresholds.spectrum_absolute
        else:
            metric, value = Metric.RESIDUAL, error / abs(formula)
            threshold = (
                thresholds.spectrum_critical if model.critical_channel(ell)
                else thresholds.spectrum_relative
            )
        results.append(CheckResult.measured(
            check_id(model, "spectrum", labels), model.name, labels, None,
            metric, value, threshold, {"formula": formula, "oracle": eigenvalue},
        ))
    return results


def check_ladder_coefficient(
    model: HierarchyModel,
    ell: Rational,
    n: Rational,
    grid: Grid,
    variant: Optional[str] = None,
    settings: CheckSettings = DEFAULT_CHECK_SETTINGS
) -> CheckResult:
    """Relative error of the measured |c| in X⁻ψ = cψ' against √(E + offset)."""
    conventional = model.conventional(ell, variant)
    coefficient = ladder_coefficient(
        model, ell, n, grid, variant, settings.kernel, settings.eigen_tol
    )
    if conventional.q != 0 and conventional.offset == -conventional.q:
        logger.warning(
            f"{model.name}: X⁺X⁻ = H - q here, so the constant enters with the opposite "
            f"sign; comparing |c|² with q(n) - q(l) (measured c = {coefficient.value:.8g})"
        )

    suffix = None if conventional.variant == "default" else conventional.variant
    detail = {
        "measured": coefficient.value,
        "predicted": coefficient.predicted,
        "proportionality": coefficient.proportionality,
        **_target_detail(coefficient.target),
    }
    return CheckResult.measured(
        check_id(model, "ladder_coefficient", coefficient.source, None, suffix),
        model.name, coefficient.source, None, Metric.RESIDUAL,
        coefficient.relative_error, settings.thresholds.ladder_coefficient, detail,
    )
