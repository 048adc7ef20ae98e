"""
Two-dimensional radial Coulomb problem.

    H^l = -d²/dr² + (2l+1)(2l-1)/(4r²) - 2/r,    E_n^l = -1/(n+1/2)²,  n = l + ν

The refined operators contain the dilation D(c_n), c_n = (2n+2)/(2n+1),
and move (n, l) in half-units, so half-integer labels are first-class.
"""
from fractions import Fraction
from typing import List, Optional, Set, Tuple

import numpy as np
from scipy.special import eval_genlaguerre

from ..exceptions import HierarchyError, LatticeError
from ..models.labels import QuantumNumbers, Rational, as_fraction
from ..numerics.grid import DomainKind
from ..numerics.operators import Differential, Dilation, OperatorChain, Scalar
from .base import ConventionalFactorization, HierarchyModel, Move

HALF = Fraction(1, 2)


class CoulombModel(HierarchyModel):
    """Radial Coulomb hierarchy."""

    name = "coulomb"
    domain_kind = DomainKind.HALF_LINE

    STEPS = {1: (HALF, HALF), 2: (HALF, -HALF)}
    LABEL_COMMUTATORS = {1: (-HALF, -HALF), 2: (-HALF, HALF)}
    QUADRATIC_MOVES = {
        "raise_l": ((1, "A"), (2, "B")),
        "lower_l": ((2, "A"), (1, "B")),
        "raise_n": ((2, "A"), (1, "A")),
        "lower_n": ((1, "B"), (2, "B")),
        "energy_preserving": ((2, "A"), (1, "B")),
    }

    def _potential(self, ell: Fraction, x: np.ndarray) -> np.ndarray:
        return float((2 * ell + 1) * (2 * ell - 1)) / (4.0 * x ** 2) - 2.0 / x

    def energy(self, n: Rational, ell: Rational = 0) -> float:
        n = as_fraction(n)
        if n == -HALF:
            raise LatticeError("Coulomb energy is undefined at n = -1/2")
        return -1.0 / float(n + HALF) ** 2

    def lattice(self, n_max: int) -> Set[QuantumNumbers]:
        return {
            QuantumNumbers(n, ell)
            for n in range(n_max + 1)
            for ell in range(n + 1)
        }

    def is_physical(self, labels: QuantumNumbers) -> bool:
        return labels.is_integral and 0 <= labels.ell <= labels.n

    def level_index(self, labels: QuantumNumbers) -> int:
        return self._require_level(labels, labels.n - abs(labels.ell))

    def level_label(self, ell: Rational, level: int) -> QuantumNumbers:
        ell = as_fraction(ell)
        return QuantumNumbers(abs(ell) + level, ell)

    def critical_channel(self, ell: Rational) -> bool:
        # the cusp of the s-channel ground state sits within a few spacings of the core
        return self.attractive_core(ell)

    def dilation_factor(self, n: Rational) -> Fraction:
        """c_n = (2n+2)/(2n+1)."""
        n = as_fraction(n)
        if 2 * n + 1 <= 0:
            raise LatticeError(f"Coulomb operators need n > -1/2, got n = {n}")
        return (2 * n + 2) / (2 * n + 1)

    def _pair_chains(self, index: int, labels: QuantumNumbers) -> Tuple[OperatorChain, OperatorChain]:
        c = float(self.dilation_factor(labels.n))
        k = float(2 * labels.n + 1)
        ell = float(labels.ell)
        tag = f"_{labels.n},{labels.ell}"

        # A² is the l -> -l image of A¹
        centrifugal = -(2.0 * ell + 1.0) if index == 1 else (2.0 * ell - 1.0)
        b_sign = 1.0 if index == 1 else -1.0

        def half_root(r):
            return np.sqrt(r) / 2.0

        def a_term(r):
            return -np.sqrt(r) / k + centrifugal / (4.0 * np.sqrt(r))

        def b_term(r):
            return np.sqrt(r) / k + b_sign * ell / (2.0 * np.sqrt(r))

        a_chain = OperatorChain(
            (Dilation(1.0 / c), Scalar(np.sqrt(c * k)), Differential(half_root, a_term)),
            f"A{index}{tag}",
        )
        b_chain = OperatorChain(
            (Scalar(np.sqrt(k)), Differential(half_root, b_term), Scalar(1.0 / np.sqrt(c)), Dilation(c)),
            f"B{index}{tag}",
        )
        return a_chain, b_chain

    def phi(self, index: int, labels: QuantumNumbers) -> Fraction:
        if index == 1:
            return -(labels.ell + labels.n + 1)
        return labels.ell - labels.n - 1

    def h_factor(self, n: Rational, ell: Rational):
        k = float(2 * as_fraction(n) + 1)
        return lambda r: -k * r / 4.0

    def conventional(self, ell: Rational, variant: Optional[str] = None) -> ConventionalFactorization:
        """
        X^±_l = ∓d/dr - (2l+1)/(2r) + 2/(2l+1), q(l) = -1/(l+1/2)².

        The products satisfy X⁺_l X⁻_l = H^l - q(l) and X⁻_l X⁺_l = H^{l+1} - q(l),
        so ground states have energy q(l).
        """
        if variant not in (None, "default"):
            raise HierarchyError(f"Coulomb has a single conventional factorization, got {variant!r}")
        ell = as_fraction(ell)
        if 2 * ell + 1 == 0:
            raise LatticeError("Coulomb conventional factorization is undefined at l = -1/2")
        s = float(2 * ell + 1)

        def w(r):
            return -s / (2.0 * r) + 2.0 / s

        q = -1.0 / float(ell + HALF) ** 2
        return ConventionalFactorization(
            label=ell,
            variant="default",
            x_plus=OperatorChain((Differential(-1.0, w),), f"Xplus_{ell}"),
            x_minus=OperatorChain((Differential(1.0, w),), f"Xminus_{ell}"),
            q=q,
            hierarchy_ell=ell,
            offset=-q,
            partner_ell=ell + 1,
            partner_offset=-q,
            image_shift=(Fraction(0), Fraction(1)),
        )

    def quadratic_reduction(self, kind: str, labels: QuantumNumbers):
        """
        B²A¹ on ψ_n^l is -((2l+1)(2n+1)/4) X⁻_l; B¹A² on ψ_n^{l+1} is
        -((2l+1)(2n+1)/4) X⁺_l.
        """
        k = float(2 * labels.n + 1)
        if kind == "raise_l":
            ell = labels.ell
            return self.conventional(ell).x_minus, -float(2 * ell + 1) * k / 4.0
        if kind == "lower_l":
            ell = labels.ell - 1
            return self.conventional(ell).x_plus, -float(2 * ell + 1) * k / 4.0
        return None

    def ground_label(self, ell: Rational) -> QuantumNumbers:
        ell = as_fraction(ell)
        if ell < 0:
            raise LatticeError(f"Coulomb ground states are built for l >= 0, got {ell}")
        return QuantumNumbers(ell, ell)

    def ground_annihilator(self, ell: Rational) -> OperatorChain:
        return self.conventional(ell).x_minus

    def _ground_values(self, ell: Fraction, x: np.ndarray) -> np.ndarray:
        a = float(ell + HALF)
        return x ** a * np.exp(-x / a)

    def _analytic_values(self, labels: QuantumNumbers, x: np.ndarray) -> np.ndarray:
        a = abs(labels.ell)
        nu = self.level_index(labels)
        kappa = 1.0 / float(labels.n + HALF)
        return (
            x ** float(a + HALF)
            * np.exp(-kappa * x)
            * eval_genlaguerre(nu, float(2 * a), 2.0 * kappa * x)
        )

    def canonical_path(self, labels: QuantumNumbers) -> Tuple[QuantumNumbers, List[Move]]:
        nu = self.level_index(labels)
        start = self.ground_label(labels.n)
        if labels.ell < 0:
            raise LatticeError(f"No ladder path to {labels} (l >= 0 required)")
        return start, [(2, "A"), (1, "B")] * nu
