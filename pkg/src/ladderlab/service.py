"""
LadderLab service - main facade.
"""
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

from .config.manager import ConfigManager
from .exceptions import LatticeError
from .hierarchies import HierarchyFactory, HierarchyModel
from .ladder import build_state
from .models.labels import QuantumNumbers, Rational, as_fraction, format_rational
from .models.report import SpectrumRow, VerificationReport
from .numerics.grid import Grid, Wavefunction, build_grid
from .numerics.oracle import assemble, lowest_eigenpairs
from .output.display import Display
from .output.exporter import Exporter
from .output.lattice import LatticeDiagram, build_lattice
from .utils.logger import get_logger
from .verification.checks import eigen_residual
from .verification.settings import CheckSettings
from .verification.suite import run_suite

logger = get_logger(__name__)


class LadderLabService:
    """
    LadderLab service facade.

    Resolves models and grids from configuration and exposes the
    spectrum, state, lattice and verification operations.
    """

    def __init__(self, config: ConfigManager):
        """
        Initialize the service.

        Args:
            config: Configuration manager
        """
        self.config = config
        self.exporter = Exporter(config.get("output", {}))
        self.display = Display(config.get("output", {}))

    def model(self, name: str) -> HierarchyModel:
        """
        Configured model instance.

        Raises:
            ModelNotFoundError: If the model is not registered
            HierarchyError: If its options are invalid
        """
        return HierarchyFactory.get_or_create_model(name, self.config.model_options(name))

    def grid(self, model: HierarchyModel, **overrides: Any) -> Grid:
        """
        Grid from ``grids.<model>`` with per-call overrides (None entries ignored).

        Raises:
            GridError: If the grid is invalid for the model's domain
        """
        spec = self.config.grid_spec(model.name)
        spec.update({key: value for key, value in overrides.items() if value is not None})
        return build_grid(model.domain_kind, float(spec["x_min"]), float(spec["x_max"]), int(spec["count"]))

    def settings(self) -> CheckSettings:
        return CheckSettings.from_config(self.config.as_dict())

    def spectrum(self, model: HierarchyModel, ell: Rational, k: int, grid: Grid) -> List[SpectrumRow]:
        """
        The k lowest oracle levels of H^l next to the closed-form energies.

        Raises:
            LatticeError: If H^l has fewer than k bound states
            OracleError: If the eigensolver fails
        """
        ell = as_fraction(ell)
        count = model.bound_state_count(ell)
        if count == 0:
            raise LatticeError(f"{model.name} H^{format_rational(ell)} has no bound states")
        if count is not None and k > count:
            raise LatticeError(
                f"{model.name} H^{format_rational(ell)} has {count} bound state(s), {k} requested"
            )

        pairs = lowest_eigenpairs(assemble(model, ell, grid), k, self.settings().eigen_tol)
        rows = []
        for level, (eigenvalue, _) in enumerate(pairs):
            labels = model.level_label(ell, level)
            formula = model.energy(labels.n, labels.ell)
            rows.append(SpectrumRow(
                n=format_rational(labels.n),
                formula=formula,
                oracle=eigenvalue,
                rel_error=abs(eigenvalue - formula) / abs(formula),
            ))
        logger.info(f"{model.name} l={format_rational(ell)}: {k} level(s) computed")
        return rows

    def state(self, model: HierarchyModel, n: Rational, ell: Rational,
              grid: Grid) -> Tuple[Wavefunction, float]:
        """
        Ladder-built ψ_n^l and its eigen residual.

        Raises:
            LatticeError: If (n, l) is not a physical label of the model
            LadderError: If the ladder walk fails
        """
        labels = QuantumNumbers(n, ell)
        if not model.is_physical(labels):
            raise LatticeError(f"{labels} is not on the {model.name} lattice")
        settings = self.settings()
        state = build_state(model, labels.n, labels.ell, grid, settings.kernel)
        residual = eigen_residual(model, state, labels)
        return state, residual

    def lattice(self, model: HierarchyModel, n_max: int) -> LatticeDiagram:
        return build_lattice(model, n_max)

    def verify(
        self,
        models: Optional[Iterable[str]] = None,
        checks: Optional[Iterable[str]] = None,
        thresholds: Optional[Dict[str, Any]] = None,
        progress: Optional[bool] = None
    ) -> VerificationReport:
        """
        Run the verification suite.

        Args:
            models: Models to verify (``models.enabled`` if omitted)
            checks: Check toggles to restrict to
            thresholds: Threshold overrides

        Raises:
            ConfigurationError: On invalid suite configuration or thresholds
        """
        settings = self.settings()
        if thresholds:
            settings = replace(settings, thresholds=settings.thresholds.updated(thresholds))
        return run_suite(self.config.as_dict(), models, checks, settings, progress)

    def export_report(self, report: VerificationReport, path: Optional[str] = None) -> Path:
        return self.exporter.export_report(report, path or self.config.get("report.path"))
