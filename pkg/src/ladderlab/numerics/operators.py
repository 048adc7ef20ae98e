"""
Generalized first-order operators acting on sampled wavefunctions.

An operator is an ordered chain of atoms applied right to left:
differential atoms a(x) d/dx + b(x), scalar multiplications c(x) and
dilations psi(x) -> psi(mu x).
"""
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.signal import savgol_filter

from ..exceptions import OperatorError
from ..utils.logger import get_logger
from .grid import DomainKind, Grid, Wavefunction

logger = get_logger(__name__)

Coefficient = Union[float, Callable[[np.ndarray], np.ndarray]]

MAX_DIFFERENTIAL_ATOMS = 2


@dataclass(frozen=True)
class KernelSettings:
    """
    Numerical settings shared by operator application and checks.

    Attributes:
        window_fraction: Fraction of points dropped at each end for residuals
        dilation_margin: Extrapolation reach beyond x_max, in domain lengths
        tail_tolerance: Relative size below which a boundary tail counts as decayed
        min_sigma_spacings: Minimum test-function width in grid spacings
        smoothing_window: Samples in the local fit of the state-building derivative (odd)
        smoothing_order: Polynomial order of that fit
    """
    window_fraction: float = 0.05
    dilation_margin: float = 1.5
    tail_tolerance: float = 1e-8
    min_sigma_spacings: float = 10.0
    smoothing_window: int = 41
    smoothing_order: int = 6

    def __post_init__(self):
        if self.smoothing_window < 3 or self.smoothing_window % 2 == 0:
            raise OperatorError(
                f"smoothing_window must be an odd number of at least 3, got {self.smoothing_window}"
            )
        if not 2 <= self.smoothing_order < self.smoothing_window:
            raise OperatorError(
                f"smoothing_order must lie in 2..{self.smoothing_window - 1}, "
                f"got {self.smoothing_order}"
            )

    @classmethod
    def from_config(cls, numerics: dict) -> "KernelSettings":
        return cls(
            window_fraction=float(numerics.get("window_fraction", cls.window_fraction)),
            dilation_margin=float(numerics.get("dilation_margin", cls.dilation_margin)),
            tail_tolerance=float(numerics.get("tail_tolerance", cls.tail_tolerance)),
            min_sigma_spacings=float(
                numerics.get("min_sigma_spacings", cls.min_sigma_spacings)
            ),
            smoothing_window=int(numerics.get("smoothing_window", cls.smoothing_window)),
            smoothing_order=int(numerics.get("smoothing_order", cls.smoothing_order)),
        )


DEFAULT_SETTINGS = KernelSettings()


@dataclass(frozen=True)
class Differential:
    """a(x) d/dx + b(x)."""
    a: Coefficient = 1.0
    b: Coefficient = 0.0


@dataclass(frozen=True)
class Scalar:
    """Multiplication by c(x)."""
    c: Coefficient = 1.0


@dataclass(frozen=True)
class Dilation:
    """psi(x) -> psi(mu x)."""
    mu: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.mu) and self.mu > 0):
            raise OperatorError(f"Dilation factor must be positive, got {self.mu}")


OperatorAtom = Union[Differential, Scalar, Dilation]


@dataclass(frozen=True)
class OperatorChain:
    """
    Product of operator atoms; the last atom acts first.

    Attributes:
        atoms: Atoms in printed order
        name: Label used in logs and reports
    """
    atoms: Tuple[OperatorAtom, ...]
    name: str = field(default="op", compare=False)

    def __post_init__(self):
        atoms = tuple(self.atoms)
        if not atoms:
            raise OperatorError("Operator chain must contain at least one atom")
        differentials = sum(isinstance(atom, Differential) for atom in atoms)
        if differentials > MAX_DIFFERENTIAL_ATOMS:
            raise OperatorError(
                f"Chain '{self.name}' has {differentials} differential atoms "
                f"(at most {MAX_DIFFERENTIAL_ATOMS})"
            )
        object.__setattr__(self, "atoms", atoms)

    @property
    def stretch(self) -> float:
        """Largest factor by which a dilation in the chain spreads a function outwards."""
        factors = [1.0 / atom.mu for atom in self.atoms if isinstance(atom, Dilation)]
        return max([1.0] + factors)

    def scaled(self, factor: float, name: Optional[str] = None) -> "OperatorChain":
        """Return factor * self."""
        return OperatorChain((Scalar(float(factor)),) + self.atoms, name or self.name)

    def __repr__(self) -> str:
        kinds = ", ".join(type(atom).__name__ for atom in self.atoms)
        return f"OperatorChain({self.name}: [{kinds}])"


def compose(outer: OperatorChain, inner: OperatorChain, name: Optional[str] = None) -> OperatorChain:
    """Chain that applies ``inner`` first and then ``outer``."""
    return OperatorChain(outer.atoms + inner.atoms, name or f"{outer.name}{inner.name}")


def derivative(values: np.ndarray, spacing: float) -> np.ndarray:
    """Three-point centered derivative with second-order one-sided ends."""
    return np.gradient(values, spacing, edge_order=2)


def second_derivative(values: np.ndarray, spacing: float) -> np.ndarray:
    """Second derivative as the square of the centered first derivative."""
    return derivative(derivative(values, spacing), spacing)


def smooth_derivative(values: np.ndarray, spacing: float, window: int = 41, order: int = 6) -> np.ndarray:
    """
    Derivative of a sliding least-squares polynomial fit (Savitzky-Golay).

    High-order accurate on smooth samples, and it passes only the low
    wavenumbers, so rounding noise is not amplified by 1/h from one ladder
    step to the next. Grids shorter than the window fit over all samples.
    """
    values = np.asarray(values, dtype=float)
    window = min(window, values.size if values.size % 2 else values.size - 1)
    if window <= order:
        return derivative(values, spacing)
    return savgol_filter(values, window, order, deriv=1, delta=spacing, mode="interp")


def _evaluate(coefficient: Coefficient, x: np.ndarray, label: str) -> np.ndarray:
    if callable(coefficient):
        with np.errstate(all="ignore"):
            values = np.asarray(coefficient(x), dtype=float)
    else:
        values = np.asarray(coefficient, dtype=float)
    values = np.broadcast_to(values, x.shape)
    if not np.all(np.isfinite(values)):
        raise OperatorError(f"Coefficient of {label} is not finite on the grid")
    return values


def _lagrange_weights(t: np.ndarray) -> np.ndarray:
    """Cubic Lagrange weights for nodes 0..3 at offsets t (in spacings)."""
    return np.stack([
        -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0,
        t * (t - 2.0) * (t - 3.0) / 2.0,
        -t * (t - 1.0) * (t - 3.0) / 2.0,
        t * (t - 1.0) * (t - 2.0) / 6.0,
    ])


def _tail(values: np.ndarray, grid: Grid, targets: np.ndarray, tolerance: float) -> np.ndarray:
    """Exponential continuation of the samples beyond x_max."""
    end, previous = values[-1], values[-2]
    scale = np.max(np.abs(values))
    if scale == 0.0:
        return np.zeros_like(targets)

    if end != 0.0 and previous != 0.0:
        ratio = end / previous
        if 0.0 < ratio < 1.0:
            steps = (targets - grid.x_max) / grid.spacing
            return end * ratio ** steps

    if abs(end) <= tolerance * scale:
        return np.zeros_like(targets)

    raise OperatorError(
        f"Cannot extrapolate a non-decaying tail (|f(x_max)|/max|f| = {abs(end) / scale:.3e})"
    )


def interpolate(
    f: Wavefunction,
    targets: np.ndarray,
    settings: KernelSettings = DEFAULT_SETTINGS
) -> np.ndarray:
    """
    Evaluate f at arbitrary points by 4-point Lagrange interpolation.

    Points up to one spacing below x_min use the edge polynomial; points
    beyond x_max within the dilation margin use the exponential tail.

    Raises:
        OperatorError: If a point falls outside the reachable range
    """
    grid = f.grid
    h = grid.spacing
    targets = np.asarray(targets, dtype=float)

    lower = grid.x_min - h * (1.0 + 1e-9)
    upper = grid.x_max + settings.dilation_margin * grid.length
    if np.any(targets < lower):
        raise OperatorError(
            f"Resampling below grid start: min point {targets.min():.6g} < {grid.x_min:.6g}"
        )
    if np.any(targets > upper):
        raise OperatorError(
            f"Resampling beyond extrapolation margin: max point {targets.max():.6g} > {upper:.6g}"
        )

    result = np.empty_like(targets)
    inside = targets <= grid.x_max + 1e-12 * grid.length

    position = (targets[inside] - grid.x_min) / h
    start = np.clip(np.floor(position).astype(int) - 1, 0, grid.count - 4)
    weights = _lagrange_weights(position - start)
    nodes = f.values[start[None, :] + np.arange(4)[:, None]]
    result[inside] = np.sum(weights * nodes, axis=0)

    if np.any(~inside):
        result[~inside] = _tail(f.values, grid, targets[~inside], settings.tail_tolerance)

    return result


def dilate(
    f: Wavefunction,
    mu: float,
    settings: KernelSettings = DEFAULT_SETTINGS
) -> Wavefunction:
    """
    Resample f(mu x) on f's own grid.

    Args:
        f: Input function
        mu: Positive dilation factor

    Returns:
        Dilated function (labels dropped)

    Raises:
        OperatorError: If mu is not positive or mu·x leaves the reachable range
    """
    if not mu > 0:
        raise OperatorError(f"Dilation factor must be positive, got {mu}")
    if mu == 1.0:
        return f.with_values(f.values)
    if f.grid.domain_kind is DomainKind.FULL_LINE and f.grid.x_min < 0 and mu > 1.0:
        raise OperatorError("Dilation with mu > 1 pushes full-line samples below the grid")
    return f.with_values(interpolate(f, mu * f.grid.points, settings))


def _apply_atom(atom: OperatorAtom, f: Wavefunction, settings: KernelSettings) -> Wavefunction:
    x = f.grid.points
    if isinstance(atom, Differential):
        a = _evaluate(atom.a, x, "differential atom")
        b = _evaluate(atom.b, x, "differential atom")
        return f.with_values(a * derivative(f.values, f.grid.spacing) + b * f.values)
    if isinstance(atom, Scalar):
        return f.with_values(_evaluate(atom.c, x, "scalar atom") * f.values)
    if isinstance(atom, Dilation):
        return dilate(f, atom.mu, settings)
    raise OperatorError(f"Unknown operator atom: {atom!r}")


def apply(
    op: OperatorChain,
    f: Wavefunction,
    settings: KernelSettings = DEFAULT_SETTINGS
) -> Wavefunction:
    """
    Apply an operator chain to a wavefunction.

    Args:
        op: Operator chain (last atom acts first)
        f: Input function

    Returns:
        Image of f (labels dropped)
    """
    result = f
    for atom in reversed(op.atoms):
        result = _apply_atom(atom, result, settings)
    return result


def apply_regular(
    op: OperatorChain,
    f: Wavefunction,
    source_power: float = 0.0,
    target_power: float = 0.0,
    settings: KernelSettings = DEFAULT_SETTINGS
) -> Wavefunction:
    """
    Apply a chain to a state f = x^p g through its regular factor g.

    On the half-line the leading power x^p of a state need not be smooth
    (p = 1/2 for integer l), and differencing it directly loses accuracy
    next to the origin. Here the atoms act on g only:

        (a d/dx + b)(x^p g) = x^p (a g' + (a p / x + b) g)
        c (x^p g) = x^p (c g)
        (x^p g)(mu x) = x^p mu^p g(mu x)

    with g' from ``smooth_derivative``. The first differential atom
    re-expresses its image over x^target_power; atoms acting before it use
    x^source_power. On the full line both powers are ignored.

    Args:
        op: Operator chain (last atom acts first)
        f: Input state
        source_power: Leading power of f
        target_power: Leading power of the image

    Returns:
        Image of f (labels dropped)
    """
    grid = f.grid
    x = grid.points
    if grid.domain_kind is DomainKind.HALF_LINE:
        power, final = float(source_power), float(target_power)
    else:
        power = final = 0.0

    g = f.values / x ** power if power else np.array(f.values)
    switched = False
    for atom in reversed(op.atoms):
        if isinstance(atom, Differential):
            a = _evaluate(atom.a, x, "differential atom")
            b = _evaluate(atom.b, x, "differential atom")
            if power:
                b = b + a * power / x
            slope = smooth_derivative(
                g, grid.spacing, settings.smoothing_window, settings.smoothing_order
            )
            g = a * slope + b * g
            if not switched:
                g = g * x ** (power - final)
                power, switched = final, True
        elif isinstance(atom, Scalar):
            g = _evaluate(atom.c, x, "scalar atom") * g
        elif isinstance(atom, Dilation):
            g = atom.mu ** power * dilate(f.with_values(g), atom.mu, settings).values
        else:
            raise OperatorError(f"Unknown operator atom: {atom!r}")

    if not switched:
        g = g * x ** (power - final)
        power = final
    return f.with_values(x ** power * g if power else g)


def commutator_apply(
    p: OperatorChain,
    q: OperatorChain,
    f: Wavefunction,
    settings: KernelSettings = DEFAULT_SETTINGS,
    p_first: Optional[OperatorChain] = None,
    q_second: Optional[OperatorChain] = None
) -> Wavefunction:
    """
    Compute (p q - q p) f by sequential application.

    Label-aware operators pick their indices from the state they act on,
    so the reversed product may need different chains; ``p_first`` and
    ``q_second`` override the operators of the ``q p`` term.

    Returns:
        p(q f) - q'(p' f)
    """
    forward = apply(p, apply(q, f, settings), settings)
    backward = apply(q_second or q, apply(p_first or p, f, settings), settings)
    return f.with_values(forward.values - backward.values)


def gaussian_test_functions(
    grid: Grid,
    count: int = 3,
    settings: KernelSettings = DEFAULT_SETTINGS,
    stretch: float = 1.0
) -> List[Wavefunction]:
    """
    Smooth bumps inside the interior window for operator-level checks.

    Centres sit at 40-60% of the usable window, whose upper end is divided
    by ``stretch`` so that dilated images stay on the grid. Half-line bumps
    carry a sqrt(x/x0) factor.

    Args:
        grid: Sampling grid
        count: Number of test functions
        stretch: Largest outward dilation factor the functions will meet

    Returns:
        Test functions
    """
    x = grid.points
    window = grid.interior(settings.window_fraction)
    low, high = x[window.start], x[window.stop - 1]
    if stretch > 1.0:
        high = high / stretch if high > 0 else high
    span = high - low
    if span <= 0:
        raise OperatorError(f"No room for test functions with stretch {stretch:.4g}")

    sigma = max(settings.min_sigma_spacings * grid.spacing, span / 14.0)
    fractions = [0.5] if count == 1 else np.linspace(0.4, 0.6, count)

    functions = []
    for fraction in fractions:
        centre = low + fraction * span
        values = np.exp(-((x - centre) ** 2) / (2.0 * sigma ** 2))
        if grid.domain_kind is DomainKind.HALF_LINE:
            values = values * np.sqrt(x / centre)
        functions.append(Wavefunction(grid, values))
    return functions


def max_stretch(chains: Sequence[OperatorChain]) -> float:
    return max([1.0] + [chain.stretch for chain in chains])
