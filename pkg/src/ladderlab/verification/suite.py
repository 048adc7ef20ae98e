"""
Verification suite runner.

Plans one task per configured check point, runs the tasks on a thread
pool bounded by an asyncio semaphore, and reduces the results into a
report ordered by check id.
"""
import asyncio
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Union

from tqdm import tqdm

from ..exceptions import ConfigurationError
from ..hierarchies import HierarchyFactory, HierarchyModel
from ..models.labels import QuantumNumbers, as_fraction, format_rational
from ..models.report import CheckResult, CheckStatus, Metric, VerificationReport
from ..numerics.grid import Grid, build_grid
from ..utils.logger import get_logger
from . import checks
from .settings import CheckSettings

logger = get_logger(__name__)

# check toggles and the result families each one produces
CHECK_FAMILIES = {
    "refined_identity": ("refined_identity", "refined_identity_partner"),
    "intertwining": ("intertwining",),
    "commutators": ("commutator", "label_commutators"),
    "hermiticity": ("hermiticity",),
    "ladder_overlap": ("ladder_overlap",),
    "quadratic": ("quadratic",),
    "spectrum": ("spectrum",),
    "ladder_coefficient": ("ladder_coefficient",),
    "annihilation": ("annihilation",),
    "eigen_residual": ("eigen_residual",),
    "half_step": ("half_step",),
}

TaskOutput = Union[CheckResult, Sequence[CheckResult]]


@dataclass(frozen=True)
class CheckTask:
    """
    One unit of suite work.

    Attributes:
        check_id: Id recorded if the task raises
        model: Model name
        metric: Metric recorded if the task raises
        threshold: Threshold recorded if the task raises
        run: Callable producing one or more results
        labels: Label recorded if the task raises
        pair: Pair index recorded if the task raises
    """
    check_id: str
    model: str
    metric: Metric
    threshold: float
    run: Callable[[], TaskOutput]
    labels: Optional[QuantumNumbers] = None
    pair: Optional[int] = None


def run_task(task: CheckTask) -> List[CheckResult]:
    """Run a task; any exception becomes a single errored result."""
    try:
        output = task.run()
    except Exception as e:
        logger.error(f"Check {task.check_id} raised {type(e).__name__}: {e}")
        return [CheckResult.errored(
            task.check_id, task.model, task.labels, task.pair, task.metric,
            task.threshold, f"{type(e).__name__}: {e}",
        )]
    if isinstance(output, CheckResult):
        return [output]
    return list(output)


def report_timestamp(deterministic: bool = True) -> str:
    """
    ISO-8601 report timestamp.

    Deterministic timestamps come from ``SOURCE_DATE_EPOCH`` (Unix epoch if unset).
    """
    if not deterministic:
        return datetime.now(timezone.utc).isoformat(timespec="seconds")
    try:
        epoch = int(os.environ.get("SOURCE_DATE_EPOCH", "0"))
    except ValueError:
        raise ConfigurationError("SOURCE_DATE_EPOCH must be an integer")
    return datetime.fromtimestamp(epoch, tz=timezone.utc).isoformat(timespec="seconds")


def model_grid(model: HierarchyModel, config: Dict[str, Any]) -> Grid:
    """
    Grid configured for a model under ``grids.<name>``.

    Raises:
        ConfigurationError: If the model has no grid section
    """
    spec = (config.get("grids") or {}).get(model.name)
    if not spec:
        raise ConfigurationError(f"No grid configured for model '{model.name}'")
    return build_grid(model.domain_kind, spec["x_min"], spec["x_max"], spec["count"])


def create_model(name: str, config: Dict[str, Any]) -> HierarchyModel:
    options = dict((config.get("models") or {}).get(name) or {})
    return HierarchyFactory.get_or_create_model(name, options)


def enabled_checks(config: Dict[str, Any], only: Optional[Iterable[str]] = None) -> List[str]:
    """
    Check toggles switched on in ``suite.checks``, optionally restricted.

    Raises:
        ConfigurationError: On unknown check names
    """
    toggles = (config.get("suite") or {}).get("checks") or {}
    names = [name for name in CHECK_FAMILIES if toggles.get(name, True)]
    if only is not None:
        only = list(only)
        unknown = sorted(set(only) - set(CHECK_FAMILIES))
        if unknown:
            raise ConfigurationError(
                f"Unknown check(s): {', '.join(unknown)}. "
                f"Available: {', '.join(CHECK_FAMILIES)}"
            )
        names = [name for name in names if name in only]
    return names


def _label(n, ell) -> QuantumNumbers:
    return QuantumNumbers(n, ell)


class SuitePlanner:
    """Turns the ``suite.points`` config of one model into check tasks."""

    def __init__(self, model: HierarchyModel, grid: Grid, points: Dict[str, Any],
                 settings: CheckSettings):
        self.model = model
        self.grid = grid
        self.points = points
        self.settings = settings
        self.thresholds = settings.thresholds

    def tasks(self, names: Sequence[str]) -> List[CheckTask]:
        planned: List[CheckTask] = []
        for name in names:
            entries = self.points.get(name) or []
            if entries:
                planned.extend(getattr(self, f"_plan_{name}")(entries))
        return planned

    def expected_families(self, names: Sequence[str]) -> List[str]:
        families = []
        for name in names:
            if self.points.get(name):
                families.extend(CHECK_FAMILIES[name])
        return families

    def _task(self, check_id, metric, threshold, run, labels=None, pair=None) -> CheckTask:
        return CheckTask(check_id, self.model.name, metric, threshold, run, labels, pair)

    def _plan_refined_identity(self, entries) -> List[CheckTask]:
        m, g, s = self.model, self.grid, self.settings
        planned = []
        for n, ell in entries:
            labels = _label(n, ell)
            for i in (1, 2):
                planned.append(self._task(
                    checks.check_id(m, "refined_identity", labels, i),
                    Metric.RESIDUAL, self.thresholds.refined_identity,
                    lambda i=i, labels=labels: checks.check_refined_identity(
                        m, i, labels.n, labels.ell, g, s),
                    labels, i,
                ))
                planned.append(self._task(
                    checks.check_id(m, "refined_identity_partner", labels, i),
                    Metric.RESIDUAL, self.thresholds.refined_identity,
                    lambda i=i, labels=labels: checks.check_refined_identity_partner(
                        m, i, labels.n, labels.ell, g, s),
                    labels, i,
                ))
        return planned

    def _plan_intertwining(self, entries) -> List[CheckTask]:
        m, g, s = self.model, self.grid, self.settings
        planned = []
        for entry in entries:
            ell = entry[0]
            variant = entry[1] if len(entry) > 1 else None
            suffix = f"l{ell}" if variant is None else f"{variant}.l{ell}"
            planned.append(self._task(
                checks.check_id(m, "intertwining", suffix=suffix),
                Metric.RESIDUAL, self.thresholds.intertwining,
                lambda ell=ell, variant=variant: checks.check_intertwining(m, ell, g, variant, s),
            ))
        return planned

    def _plan_commutators(self, entries) -> List[CheckTask]:
        m, g, s = self.model, self.grid, self.settings
        labels = [_label(n, ell) for n, ell in entries]
        planned = []
        for point in labels:
            for i in (1, 2):
                planned.append(self._task(
                    checks.check_id(m, "commutator", point, i, "AB"),
                    Metric.RESIDUAL, self.thresholds.commutator,
                    lambda i=i, point=point: checks.check_identity_commutator(m, i, point, g, s),
                    point, i,
                ))
            for kind in ("B", "A"):
                planned.append(self._task(
                    checks.check_id(m, "commutator", point, None, f"A1{kind}2"),
                    Metric.RESIDUAL, self.thresholds.commutator,
                    lambda kind=kind, point=point: checks.check_cross_commutator(
                        m, kind, point, g, s),
                    point,
                ))
        planned.append(self._task(
            checks.check_id(m, "label_commutators"),
            Metric.ABSOLUTE_ERROR, 0.0,
            lambda: checks.check_label_commutators(m, labels),
        ))
        return planned

    def _plan_hermiticity(self, entries) -> List[CheckTask]:
        m, g, s = self.model, self.grid, self.settings
        planned = []
        for n, ell in entries:
            labels = _label(n, ell)
            for i in (1, 2):
                planned.append(self._task(
                    checks.check_id(m, "hermiticity", labels, i),
                    Metric.RESIDUAL, self.thresholds.hermiticity,
                    lambda i=i, labels=labels: checks.check_hermiticity(m, i, labels, g, s),
                    labels, i,
                ))
        return planned

    def _plan_ladder_overlap(self, entries) -> List[CheckTask]:
        m, g, s = self.model, self.grid, self.settings
        planned = []
        for n, ell in entries:
            labels = _label(n, ell)
            for i in (1, 2):
                planned.append(self._task(
                    checks.check_id(m, "ladder_overlap", labels, i),
                    Metric.OVERLAP, self.thresholds.ladder_overlap,
                    lambda i=i, labels=labels: checks.check_ladder_overlap(
                        m, i, labels.n, labels.ell, g, s),
                    labels, i,
                ))
        return planned

    def _plan_quadratic(self, entries) -> List[CheckTask]:
        m, g, s = self.model, self.grid, self.settings
        planned = []
        for kind, n, ell in entries:
            labels = _label(n, ell)
            planned.append(self._task(
                checks.check_id(m, "quadratic", labels, None, kind),
                Metric.RESIDUAL, self.thresholds.quadratic_reduction,
                lambda kind=kind, labels=labels: checks.check_quadratic_point(
                    m, kind, labels.n, labels.ell, g, s),
                labels,
            ))
        return planned

    def _plan_spectrum(self, entries) -> List[CheckTask]:
        m, g, s = self.model, self.grid, self.settings
        planned = []
        for ell, k in entries:
            planned.append(self._task(
                checks.check_id(m, "spectrum", suffix=f"l{format_rational(as_fraction(ell))}"),
                Metric.RESIDUAL, self.thresholds.spectrum_relative,
                lambda ell=ell, k=k: checks.check_spectrum(m, ell, int(k), g, s),
            ))
        return planned

    def _plan_ladder_coefficient(self, entries) -> List[CheckTask]:
        m, g, s = self.model, self.grid, self.settings
        planned = []
        for entry in entries:
            ell, n = entry[0], entry[1]
            variant = entry[2] if len(entry) > 2 else None
            planned.append(self._task(
                checks.check_id(m, "ladder_coefficient", suffix=f"l{ell}.n{n}"),
                Metric.RESIDUAL, self.thresholds.ladder_coefficient,
                lambda ell=ell, n=n, variant=variant: checks.check_ladder_coefficient(
                    m, ell, n, g, variant, s),
            ))
        return planned

    def _plan_annihilation(self, entries) -> List[CheckTask]:
        m, g, s = self.model, self.grid, self.settings
        return [
            self._task(
                checks.check_id(m, "annihilation", suffix=f"l{ell}"),
                Metric.RESIDUAL, self.thresholds.annihilation,
                lambda ell=ell: checks.check_annihilation(m, ell, g, s),
            )
            for ell in entries
        ]

    def _plan_eigen_residual(self, entries) -> List[CheckTask]:
        m, g, s = self.model, self.grid, self.settings
        planned = []
        for n, ell in entries:
            labels = _label(n, ell)
            planned.append(self._task(
                checks.check_id(m, "eigen_residual", labels),
                Metric.RESIDUAL, self.thresholds.eigen_residual,
                lambda labels=labels: checks.check_eigen_residual(m, labels.n, labels.ell, g, s),
                labels,
            ))
        return planned

    def _plan_half_step(self, entries) -> List[CheckTask]:
        m, g, s = self.model, self.grid, self.settings
        planned = []
        for i, n, ell in entries:
            labels = _label(n, ell)
            planned.append(self._task(
                checks.check_id(m, "half_step", labels, int(i)),
                Metric.RESIDUAL, self.thresholds.eigen_residual,
                lambda i=int(i), labels=labels: checks.check_half_step(
                    m, i, labels.n, labels.ell, g, s),
                labels, int(i),
            ))
        return planned


def coverage_result(expected: Dict[str, List[str]], results: Sequence[CheckResult]) -> CheckResult:
    """
    Every expected (model, family) pair must have at least one measured result.

    The value is the number of uncovered pairs.
    """
    measured = {
        (result.model, result.check_id.split(".")[1])
        for result in results
        if result.status in (CheckStatus.PASSED, CheckStatus.FAILED)
    }
    missing = sorted(
        f"{model}.{family}"
        for model, families in expected.items()
        for family in families
        if (model, family) not in measured
    )
    if missing:
        logger.warning(f"Suite coverage gaps: {', '.join(missing)}")
    return CheckResult.measured(
        "suite.coverage", "suite", None, None, Metric.ABSOLUTE_ERROR,
        float(len(missing)), 0.0, {"missing": missing},
    )


async def _execute(tasks: Sequence[CheckTask], max_workers: int,
                   progress: bool) -> List[List[CheckResult]]:
    semaphore = asyncio.Semaphore(max_workers)
    loop = asyncio.get_running_loop()

    with ThreadPoolExecutor(max_workers=max_workers) as pool, \
            tqdm(total=len(tasks), desc="checks", unit="check", disable=not progress) as bar:

        async def run(task: CheckTask) -> List[CheckResult]:
            async with semaphore:
                results = await loop.run_in_executor(pool, run_task, task)
            bar.update(1)
            return results

        return await asyncio.gather(*(run(task) for task in tasks))


def run_suite(
    config: Dict[str, Any],
    models: Optional[Iterable[str]] = None,
    only: Optional[Iterable[str]] = None,
    settings: Optional[CheckSettings] = None,
    progress: Optional[bool] = None
) -> VerificationReport:
    """
    Run every enabled check over the configured lattice points.

    Args:
        config: Full configuration dictionary
        models: Model names overriding ``models.enabled``
        only: Restrict to these check toggles
        settings: Check settings (built from ``config`` if omitted)
        progress: Show a progress bar (``output.progress`` if omitted)

    Returns:
        Report with results ordered by check id

    Raises:
        ConfigurationError: On invalid suite configuration
        ModelNotFoundError: On unknown model names
    """
    settings = settings or CheckSettings.from_config(config)
    suite = config.get("suite") or {}
    names = enabled_checks(config, only)
    model_names = list(models) if models is not None else list(
        (config.get("models") or {}).get("enabled") or []
    )
    performance = config.get("performance") or {}
    max_workers = max(1, int(performance.get("max_workers", 4)))
    if progress is None:
        progress = bool((config.get("output") or {}).get("progress", True))

    tasks: List[CheckTask] = []
    grids: Dict[str, Any] = {}
    expected: Dict[str, List[str]] = {}
    for name in model_names:
        model = create_model(name, config)
        grid = model_grid(model, config)
        planner = SuitePlanner(model, grid, (suite.get("points") or {}).get(name) or {}, settings)
        tasks.extend(planner.tasks(names))
        grids[name] = grid.to_dict()
        expected[name] = planner.expected_families(names)

    logger.info(
        f"Suite '{suite.get('name', 'default')}': {len(tasks)} task(s) over "
        f"{len(model_names)} model(s), {max_workers} worker(s)"
    )

    batches = asyncio.run(_execute(tasks, max_workers, progress)) if tasks else []
    results = [result for batch in batches for result in batch]
    if any(expected.values()):
        results.append(coverage_result(expected, results))

    report = VerificationReport(
        suite=suite.get("name", "default"),
        timestamp=report_timestamp(bool((config.get("report") or {}).get("deterministic", True))),
        grid=grids,
        checks=results,
    )
    logger.info(f"Suite finished: {report.summary}")
    return report
