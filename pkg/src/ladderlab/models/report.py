"""
Data models for verification results.
"""
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from .labels import QuantumNumbers


class Metric(Enum):
    """Quantity a check measures, with its pass orientation."""
    RESIDUAL = "residual"
    ABSOLUTE_RESIDUAL = "absolute_residual"
    ABSOLUTE_ERROR = "absolute_error"
    OVERLAP = "overlap"

    @property
    def higher_is_better(self) -> bool:
        return self is Metric.OVERLAP

    def passes(self, value: float, threshold: float) -> bool:
        """Whether ``value`` is within ``threshold`` for this metric."""
        if value is None or not math.isfinite(value):
            return False
        if self.higher_is_better:
            return value >= threshold
        return value <= threshold


class CheckStatus(Enum):
    """Outcome of a check."""
    PASSED = "passed"
    FAILED = "failed"
    ERRORED = "errored"
    SKIPPED = "skipped"


@dataclass
class CheckResult:
    """
    Single verification check.

    Attributes:
        check_id: Unique, sortable identifier
        model: Model name
        labels: Lattice label the check was run at
        pair: Refined pair index, if any
        metric: Measured quantity
        value: Measured value (None when the check did not run)
        threshold: Pass threshold
        status: Outcome
        detail: Extra measured quantities (fitted constants, eigenvalues)
        message: Reason for skipped or errored checks
    """
    check_id: str
    model: str
    labels: Optional[QuantumNumbers]
    pair: Optional[int]
    metric: Metric
    value: Optional[float]
    threshold: float
    status: CheckStatus
    detail: Dict[str, Any] = field(default_factory=dict)
    message: Optional[str] = None

    @classmethod
    def measured(
        cls,
        check_id: str,
        model: str,
        labels: Optional[QuantumNumbers],
        pair: Optional[int],
        metric: Metric,
        value: float,
        threshold: float,
        detail: Optional[Dict[str, Any]] = None
    ) -> "CheckResult":
        """Build a result whose status follows from (metric, value, threshold)."""
        value = float(value)
        status = CheckStatus.PASSED if metric.passes(value, threshold) else CheckStatus.FAILED
        stored = value if math.isfinite(value) else None
        return cls(check_id, model, labels, pair, metric, stored, float(threshold),
                   status, dict(detail or {}))

    @classmethod
    def errored(
        cls,
        check_id: str,
        model: str,
        labels: Optional[QuantumNumbers],
        pair: Optional[int],
        metric: Metric,
        threshold: float,
        message: str
    ) -> "CheckResult":
        return cls(check_id, model, labels, pair, metric, None, float(threshold),
                   CheckStatus.ERRORED, {}, message)

    @classmethod
    def skipped(
        cls,
        check_id: str,
        model: str,
        labels: Optional[QuantumNumbers],
        pair: Optional[int],
        metric: Metric,
        threshold: float,
        message: str
    ) -> "CheckResult":
        return cls(check_id, model, labels, pair, metric, None, float(threshold),
                   CheckStatus.SKIPPED, {}, message)

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASSED

    def to_dict(self) -> Dict[str, Any]:
        """Convert result to dictionary."""
        labels = self.labels.to_dict() if self.labels else {"n": None, "l": None}
        data = {
            "id": self.check_id,
            "model": self.model,
            "n": labels["n"],
            "l": labels["l"],
            "pair": self.pair,
            "metric": self.metric.value,
            "value": self.value,
            "threshold": self.threshold,
            "passed": self.passed,
            "status": self.status.value,
            "detail": self.detail,
        }
        if self.message:
            data["message"] = self.message
        return data


@dataclass(frozen=True)
class SpectrumRow:
    """
    One oracle level next to its closed-form energy.

    Attributes:
        n: Energy label, rendered (``3`` or ``1/2``)
        formula: Closed-form energy
        oracle: Finite-difference eigenvalue
        rel_error: |oracle - formula| / |formula|
    """
    n: str
    formula: float
    oracle: float
    rel_error: float


@dataclass
class VerificationReport:
    """
    Aggregated verification run.

    Attributes:
        suite: Suite name
        timestamp: ISO-8601 timestamp
        grid: Grid description per model
        checks: Results ordered by check id
    """
    suite: str
    timestamp: str
    grid: Dict[str, Any] = field(default_factory=dict)
    checks: List[CheckResult] = field(default_factory=list)

    def __post_init__(self):
        self.checks = sorted(self.checks, key=lambda check: check.check_id)

    @property
    def summary(self) -> Dict[str, int]:
        counts = {status.value: 0 for status in CheckStatus}
        for check in self.checks:
            counts[check.status.value] += 1
        return {"total": len(self.checks), **counts}

    @property
    def all_passed(self) -> bool:
        summary = self.summary
        return summary["failed"] == 0 and summary["errored"] == 0

    def to_dict(self) -> Dict[str, Any]:
        """Convert report to dictionary."""
        return {
            "suite": self.suite,
            "timestamp": self.timestamp,
            "grid": self.grid,
            "checks": [check.to_dict() for check in self.checks],
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def __repr__(self) -> str:
        summary = self.summary
        return (
            f"VerificationReport("
            f"suite={self.suite}, "
            f"total={summary['total']}, "
            f"passed={summary['passed']}, "
            f"failed={summary['failed']})"
        )
