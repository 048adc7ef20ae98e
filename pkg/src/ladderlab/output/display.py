"""
Console rendering with rich.
"""
from typing import Any, Dict, Optional, Sequence

import numpy as np
from rich.console import Console
from rich.table import Table

from ..models.report import CheckStatus, SpectrumRow, VerificationReport

SPARK_LEVELS = " .:-=+*#%@"

STATUS_STYLES = {
    CheckStatus.PASSED: "green",
    CheckStatus.FAILED: "bold red",
    CheckStatus.ERRORED: "bold magenta",
    CheckStatus.SKIPPED: "yellow",
}


def sparkline(values: np.ndarray, width: int = 64) -> str:
    """ASCII sparkline of |values|, one character per column."""
    magnitude = np.abs(np.asarray(values, dtype=float))
    if magnitude.size == 0:
        return ""
    columns = np.array_split(magnitude, min(width, magnitude.size))
    heights = np.array([column.max() for column in columns])
    peak = heights.max()
    if peak == 0.0:
        return SPARK_LEVELS[0] * len(heights)
    scaled = np.rint(heights / peak * (len(SPARK_LEVELS) - 1)).astype(int)
    return "".join(SPARK_LEVELS[level] for level in scaled)


class Display:
    """
    Tables and messages for the terminal.

    Args:
        config: The ``output`` config section
        console: Console to print to (a fresh stdout console if omitted)
    """

    def __init__(self, config: Optional[Dict[str, Any]] = None, console: Optional[Console] = None):
        self.config = config or {}
        self.console = console or Console(highlight=False)

    def print_spectrum(self, model: str, ell: str, rows: Sequence[SpectrumRow]) -> None:
        table = Table(title=f"{model} spectrum, l = {ell}")
        table.add_column("n", justify="right")
        table.add_column("E_formula", justify="right")
        table.add_column("E_oracle", justify="right")
        table.add_column("rel_error", justify="right")
        for row in rows:
            table.add_row(row.n, f"{row.formula:.10g}", f"{row.oracle:.10g}", f"{row.rel_error:.3e}")
        self.console.print(table)

    def print_state(self, labels: str, count: int, residual: float,
                    values: Optional[np.ndarray] = None) -> None:
        self.console.print(f"state {labels}: {count} points, eigen residual {residual:.3e}")
        if values is not None:
            self.console.print(sparkline(values))

    def print_report(self, report: VerificationReport, verbose: bool = False) -> None:
        """Summary line, plus a table of all checks (verbose) or of the non-passing ones."""
        shown = [
            check for check in report.checks
            if verbose or check.status is not CheckStatus.PASSED
        ]
        if shown:
            table = Table(title=f"suite {report.suite}")
            table.add_column("check")
            table.add_column("value", justify="right")
            table.add_column("threshold", justify="right")
            table.add_column("status")
            for check in shown:
                value = "-" if check.value is None else f"{check.value:.3e}"
                style = STATUS_STYLES[check.status]
                table.add_row(
                    check.check_id, value, f"{check.threshold:.1e}",
                    f"[{style}]{check.status.value}[/{style}]",
                )
            self.console.print(table)

        summary = report.summary
        line = f"{summary['passed']} passed / {summary['failed']} failed"
        if summary["errored"]:
            line += f" / {summary['errored']} errored"
        if summary["skipped"]:
            line += f" / {summary['skipped']} skipped"
        style = "green" if report.all_passed else "bold red"
        self.console.print(f"[{style}]{line}[/{style}]")

    def print_text(self, text: str) -> None:
        self.console.print(text, markup=False)

    def print_success(self, message: str) -> None:
        self.console.print(f"[green]✓[/green] {message}")
