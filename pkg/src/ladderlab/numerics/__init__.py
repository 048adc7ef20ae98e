"""
Grids, the operator kernel and the finite-difference oracle.
"""
from .grid import (
    DomainKind,
    Grid,
    Wavefunction,
    build_grid,
    inner_product,
    norm,
    normalize,
)
from .operators import (
    DEFAULT_SETTINGS,
    Differential,
    Dilation,
    KernelSettings,
    OperatorChain,
    Scalar,
    apply,
    commutator_apply,
    compose,
    derivative,
    dilate,
    gaussian_test_functions,
    second_derivative,
)
from .oracle import (
    TridiagonalOperator,
    assemble,
    eigenvalue_convergence,
    lowest_eigenpairs,
    oracle_state,
    sturm_count,
)

__all__ = [
    "DomainKind",
    "Grid",
    "Wavefunction",
    "build_grid",
    "inner_product",
    "norm",
    "normalize",
    "DEFAULT_SETTINGS",
    "Differential",
    "Dilation",
    "KernelSettings",
    "OperatorChain",
    "Scalar",
    "apply",
    "commutator_apply",
    "compose",
    "derivative",
    "dilate",
    "gaussian_test_functions",
    "second_derivative",
    "TridiagonalOperator",
    "assemble",
    "eigenvalue_convergence",
    "lowest_eigenpairs",
    "oracle_state",
    "sturm_count",
]
