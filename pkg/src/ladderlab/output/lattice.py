"""
Text diagram of a model's (n, l) lattice and its ladder arrows.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Set, Tuple

from ..exceptions import LatticeError
from ..hierarchies.base import MOVE_KINDS, PAIR_INDICES, HierarchyModel
from ..models.labels import QuantumNumbers, format_rational

MAX_LATTICE_N = 12

LATTICE_POINT = "o"
HALF_STEP_POINT = "+"
EMPTY = "."


@dataclass(frozen=True)
class Arrow:
    """A free move between two displayed labels."""
    source: QuantumNumbers
    target: QuantumNumbers
    index: int
    kind: str

    @property
    def name(self) -> str:
        return f"{self.kind}{self.index}"


@dataclass(frozen=True)
class LatticeDiagram:
    """
    Physical lattice points, the half-step labels reached from them, and
    the arrows between displayed labels.
    """
    model: str
    points: Tuple[QuantumNumbers, ...]
    half_steps: Tuple[QuantumNumbers, ...]
    arrows: Tuple[Arrow, ...]

    def render(self) -> str:
        labels = self.points + self.half_steps
        if not labels:
            return f"{self.model}: no lattice points"

        half_step = any(not label.is_integral for label in labels)
        unit = Fraction(1, 2) if half_step else Fraction(1)
        ns = _axis(min(label.n for label in labels), max(label.n for label in labels), unit)
        ells = _axis(min(label.ell for label in labels), max(label.ell for label in labels), unit)
        physical = set(self.points)
        halves = set(self.half_steps)

        width = max(len(format_rational(ell)) for ell in ells) + 1
        lines = [f"{self.model} lattice (rows n, columns l; "
                 f"{LATTICE_POINT} state, {HALF_STEP_POINT} half-step)"]
        lines.append("n\\l " + "".join(format_rational(ell).rjust(width) for ell in ells))
        for n in reversed(ns):
            cells = []
            for ell in ells:
                label = QuantumNumbers(n, ell)
                mark = LATTICE_POINT if label in physical else (
                    HALF_STEP_POINT if label in halves else EMPTY
                )
                cells.append(mark.rjust(width))
            lines.append(format_rational(n).rjust(3) + " " + "".join(cells))

        lines.append("")
        for arrow in self.arrows:
            lines.append(f"{arrow.source} --{arrow.name}--> {arrow.target}")
        return "\n".join(lines)


def _axis(low: Fraction, high: Fraction, unit: Fraction) -> List[Fraction]:
    values = []
    value = low
    while value <= high:
        values.append(value)
        value += unit
    return values


def build_lattice(model: HierarchyModel, n_max: int) -> LatticeDiagram:
    """
    Lattice points with n ≤ n_max and every A^i/B^i arrow that stays on
    the displayed set. Non-integral targets are displayed as half-steps.

    Raises:
        LatticeError: If n_max is outside 0..12
    """
    if not 0 <= n_max <= MAX_LATTICE_N:
        raise LatticeError(f"n_max must be in 0..{MAX_LATTICE_N}, got {n_max}")

    points = sorted(model.lattice(n_max))
    physical: Set[QuantumNumbers] = set(points)
    half_steps: Set[QuantumNumbers] = set()
    arrows = []
    for source in points:
        for index in PAIR_INDICES:
            for kind in MOVE_KINDS:
                try:
                    target = model.free_operator(index, kind, source).target
                except LatticeError:
                    continue
                if target in physical:
                    arrows.append(Arrow(source, target, index, kind))
                elif not target.is_integral and target.n >= 0 and target.ell >= 0:
                    half_steps.add(target)
                    arrows.append(Arrow(source, target, index, kind))

    return LatticeDiagram(model.name, tuple(points), tuple(sorted(half_steps)), tuple(arrows))
