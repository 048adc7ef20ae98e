"""
Identity checks and the verification suite.
"""
from .checks import (
    check_annihilation,
    check_commutator_table,
    check_cross_commutator,
    check_eigen_residual,
    check_half_step,
    check_hermiticity,
    check_id,
    check_identity_commutator,
    check_intertwining,
    check_label_commutators,
    check_ladder_coefficient,
    check_ladder_overlap,
    check_quadratic_point,
    check_quadratic_reduction,
    check_refined_identity,
    check_refined_identity_partner,
    check_spectrum,
    eigen_residual,
)
from .settings import DEFAULT_CHECK_SETTINGS, CheckSettings, Thresholds
from .suite import CHECK_FAMILIES, run_suite

__all__ = [
    "check_annihilation",
    "check_commutator_table",
    "check_cross_commutator",
    "check_eigen_residual",
    "check_half_step",
    "check_hermiticity",
    "check_id",
    "check_identity_commutator",
    "check_intertwining",
    "check_label_commutators",
    "check_ladder_coefficient",
    "check_ladder_overlap",
    "check_quadratic_point",
    "check_quadratic_reduction",
    "check_refined_identity",
    "check_refined_identity_partner",
    "check_spectrum",
    "eigen_residual",
    "DEFAULT_CHECK_SETTINGS",
    "CheckSettings",
    "Thresholds",
    "CHECK_FAMILIES",
    "run_suite",
]
