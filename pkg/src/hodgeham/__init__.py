"""Exact, block-by-block Hochschild homology of polynomial rings with its
Hodge decomposition, plus the Harrison and Kähler checks built on it."""

from .exactq import BlockMatrix, LinearSolver, SubspaceBasis, kernel_basis, rank, rref
from .hochschild import (
    DEFAULT_CAP,
    HodgeCell,
    ResourceCapExceeded,
    boundary,
    cohomology_dims,
    hodge_table,
    homology_dims,
)
from .monomial import REGULAR, ChainVector, ModuleKind
from .report import Check, HodgeReport
from .symgroup import GroupAlgebraElement, Permutation, eulerian_idempotent

__version__ = "0.1.0"

__all__ = [
    "BlockMatrix",
    "ChainVector",
    "Check",
    "DEFAULT_CAP",
    "GroupAlgebraElement",
    "HodgeCell",
    "HodgeReport",
    "LinearSolver",
    "ModuleKind",
    "Permutation",
    "REGULAR",
    "ResourceCapExceeded",
    "SubspaceBasis",
    "boundary",
    "cohomology_dims",
    "eulerian_idempotent",
    "hodge_table",
    "homology_dims",
    "kernel_basis",
    "rank",
    "rref",
]
