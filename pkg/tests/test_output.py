"""
Tests for exporters, console helpers and lattice diagrams.
"""
import numpy as np
import pytest

from ladderlab.exceptions import ConfigurationError, LatticeError
from ladderlab.models.labels import QuantumNumbers
from ladderlab.models.report import SpectrumRow
from ladderlab.output.display import sparkline
from ladderlab.output.exporter import Exporter
from ladderlab.output.lattice import build_lattice


class TestSparkline:

    def test_levels(self):
        assert sparkline(np.array([0.0, -1.0, 0.25])) == " @:"

    def test_flat_zero(self):
        assert sparkline(np.zeros(5)) == "     "

    def test_width(self):
        assert len(sparkline(np.linspace(0, 1, 1000), width=40)) == 40


class TestExporter:

    def test_digits_range(self):
        with pytest.raises(ConfigurationError, match="csv_digits"):
            Exporter({"csv_digits": 0})

    def test_spectrum(self, tmp_path):
        rows = [SpectrumRow(n="1", formula=-0.25, oracle=-0.2500001, rel_error=4e-7)]
        path = Exporter({"csv_digits": 6}).export_spectrum(rows, tmp_path / "out" / "s.csv")
        assert path.read_text(encoding="utf-8").splitlines() == [
            "n,E_formula,E_oracle,rel_error",
            "1,-0.25,-0.25,4e-07",
        ]


class TestLattice:

    def test_oscillator_points(self, oscillator):
        diagram = build_lattice(oscillator, 2)
        assert diagram.points == tuple(sorted(_labels((0, 0), (1, 1), (2, 0), (2, 2))))
        assert diagram.half_steps == ()
        names = {(str(a.source), a.name, str(a.target)) for a in diagram.arrows}
        assert ("(0,0)", "A1", "(1,1)") in names
        assert ("(1,1)", "B1", "(0,0)") in names

    def test_coulomb_half_steps(self, coulomb):
        diagram = build_lattice(coulomb, 1)
        assert QuantumNumbers("1/2", "1/2") in diagram.half_steps
        text = diagram.render()
        assert text.startswith("coulomb lattice")
        assert "+" in text
        assert "(0,0) --A1--> (1/2,1/2)" in text

    def test_morse_bounds(self, morse):
        with pytest.raises(LatticeError, match="0..12"):
            build_lattice(morse, 13)


def _labels(*points):
    return [QuantumNumbers(n, ell) for n, ell in points]
