"""
CSV and JSON export.

Numbers are written with a fixed number of significant digits so that
repeated runs with identical flags produce identical files.
"""
from pathlib import Path
from typing import Any, Dict, Sequence, Union

import numpy as np

from ..exceptions import ConfigurationError
from ..models.report import SpectrumRow, VerificationReport
from ..numerics.grid import Wavefunction
from ..utils.logger import get_logger

logger = get_logger(__name__)


class Exporter:
    """
    Writes states, spectra and reports to disk.

    Args:
        config: The ``output`` config section (``csv_digits``)
    """

    def __init__(self, config: Dict[str, Any]):
        digits = int(config.get("csv_digits", 17))
        if not 1 <= digits <= 17:
            raise ConfigurationError(f"output.csv_digits must be in 1..17, got {digits}")
        self.fmt = f"%.{digits}g"

    @staticmethod
    def _prepare(path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def export_state(self, state: Wavefunction, path: Union[str, Path]) -> Path:
        """Write ``x,psi`` rows, one per grid point."""
        path = self._prepare(path)
        table = np.column_stack((state.grid.points, state.values))
        np.savetxt(path, table, fmt=self.fmt, delimiter=",", header="x,psi", comments="")
        logger.info(f"State {state.labels} written to {path} ({state.grid.count} rows)")
        return path

    def export_spectrum(self, rows: Sequence[SpectrumRow], path: Union[str, Path]) -> Path:
        """Write ``n,E_formula,E_oracle,rel_error`` rows."""
        path = self._prepare(path)
        lines = ["n,E_formula,E_oracle,rel_error"]
        for row in rows:
            lines.append(",".join((
                row.n,
                self.fmt % row.formula,
                self.fmt % row.oracle,
                self.fmt % row.rel_error,
            )))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.info(f"Spectrum written to {path} ({len(rows)} rows)")
        return path

    def export_report(self, report: VerificationReport, path: Union[str, Path]) -> Path:
        path = self._prepare(path)
        path.write_text(report.to_json() + "\n", encoding="utf-8")
        logger.info(f"Report written to {path}")
        return path
