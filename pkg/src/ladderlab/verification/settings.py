"""
Thresholds and numerical knobs for verification checks.
"""
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict

from ..exceptions import ConfigurationError, OperatorError
from ..numerics.operators import DEFAULT_SETTINGS, KernelSettings
from ..numerics.oracle import DEFAULT_EIGEN_TOL

# right-hand sides below this norm switch a check to absolute residuals
RHS_FLOOR = 1e-12

# operator-check refinement per model; Morse commutators need 32x to reach 1e-5
DEFAULT_MODEL_REFINE = {"morse": 32}


@dataclass(frozen=True)
class Thresholds:
    """Pass gates, one per check family."""
    refined_identity: float = 1e-5
    refined_identity_dilation: float = 1e-4
    intertwining: float = 1e-5
    commutator: float = 1e-5
    commutator_dilation: float = 1e-4
    ladder_overlap: float = 0.9999
    ladder_overlap_half_step: float = 0.999
    quadratic_reduction: float = 1e-5
    ladder_coefficient: float = 1e-3
    annihilation: float = 1e-5
    spectrum_relative: float = 1e-4
    spectrum_absolute: float = 1e-4
    spectrum_critical: float = 5e-3
    absolute_fallback: float = 1e-10
    hermiticity: float = 1e-6
    eigen_residual: float = 1e-4

    @classmethod
    def from_config(cls, thresholds: Dict[str, Any]) -> "Thresholds":
        """
        Build thresholds from the ``thresholds`` config section.

        Raises:
            ConfigurationError: On unknown keys or non-numeric values
        """
        return cls().updated(thresholds or {})

    def updated(self, overrides: Dict[str, Any]) -> "Thresholds":
        known = {item.name for item in fields(self)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ConfigurationError(f"Unknown threshold(s): {', '.join(unknown)}")
        try:
            values = {key: float(value) for key, value in overrides.items()}
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Threshold values must be numbers: {e}")
        return replace(self, **values)

    def to_dict(self) -> Dict[str, float]:
        return {item.name: getattr(self, item.name) for item in fields(self)}


@dataclass(frozen=True)
class CheckSettings:
    """
    Everything a check needs besides the model and grid.

    Attributes:
        kernel: Operator kernel settings
        thresholds: Pass gates
        test_functions: Gaussian test functions per operator check
        operator_refine: Point multiplier for operator-level checks
        model_refine: Per-model overrides of ``operator_refine``
        annihilation_refine: Point multiplier for support-fitted grids
        eigen_tol: Oracle bisection tolerance
    """
    kernel: KernelSettings = DEFAULT_SETTINGS
    thresholds: Thresholds = field(default_factory=Thresholds)
    test_functions: int = 3
    operator_refine: int = 2
    model_refine: Dict[str, int] = field(default_factory=lambda: dict(DEFAULT_MODEL_REFINE))
    annihilation_refine: int = 4
    eigen_tol: float = DEFAULT_EIGEN_TOL

    def refine_for(self, model: str) -> int:
        """Operator-check point multiplier for a model."""
        return int(self.model_refine.get(model, self.operator_refine))

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> "CheckSettings":
        numerics = config.get("numerics", {}) or {}
        try:
            settings = cls(
                kernel=KernelSettings.from_config(numerics),
                thresholds=Thresholds.from_config(config.get("thresholds", {})),
                test_functions=int(numerics.get("test_functions", 3)),
                operator_refine=int(numerics.get("operator_refine", 2)),
                model_refine={
                    str(name): int(value)
                    for name, value in (numerics.get("model_refine", DEFAULT_MODEL_REFINE) or {}).items()
                },
                annihilation_refine=int(numerics.get("annihilation_refine", 4)),
                eigen_tol=float(numerics.get("eigen_tol", DEFAULT_EIGEN_TOL)),
            )
        except (TypeError, ValueError, AttributeError, OperatorError) as e:
            raise ConfigurationError(f"Invalid numerics settings: {e}")

        if settings.test_functions < 3:
            raise ConfigurationError("numerics.test_functions must be at least 3")
        refinements = [settings.operator_refine, settings.annihilation_refine]
        if min(refinements + list(settings.model_refine.values())) < 1:
            raise ConfigurationError("Refinement factors must be positive integers")
        return settings


DEFAULT_CHECK_SETTINGS = CheckSettings()
