"""Data models."""
from .labels import QuantumNumbers, as_fraction, format_rational
from .report import CheckResult, CheckStatus, Metric, SpectrumRow, VerificationReport

__all__ = [
    "QuantumNumbers",
    "as_fraction",
    "format_rational",
    "CheckResult",
    "CheckStatus",
    "Metric",
    "SpectrumRow",
    "VerificationReport",
]
