"""
The two algebra families with closed-form theory: rank-one algebras
(dim A^2 = 1, A^2 spanned by the last basis vector) and chain algebras
(generated by one element z, basis z, z^2, ..., z^n).
"""

import numpy as np

from fpcore.matrices import FpMatrix

from .algebra import NilpotentAlgebra
from .exceptions import DimensionMismatch, StructureMatrixError

FAMILY_RANK1 = "rank1"
FAMILY_CHAIN = "chain"

FAMILY_CHOICES = [
    (FAMILY_RANK1, "rank-one: z_i z_j = Phi_ij z_n"),
    (FAMILY_CHAIN, "chain: z^i z^j = z^(i+j)"),
]


def check_structure_matrix(phi):
    if not phi.is_symmetric():
        raise StructureMatrixError("structure matrix must be symmetric")
    if phi.entries[-1].any() or phi.entries[:, -1].any():
        raise StructureMatrixError(
            "structure matrix must have zero last row and column"
        )


def rank1_algebra(phi, n=None):
    """z_i * z_j = Phi[i, j] z_{n-1} for a symmetric Phi with zero last row/col."""
    if not isinstance(phi, FpMatrix):
        raise StructureMatrixError("structure matrix must be an FpMatrix")
    if n is not None and phi.shape != (n, n):
        raise DimensionMismatch(f"expected a {n} x {n} structure matrix")
    if not phi.is_square():
        raise DimensionMismatch(f"structure matrix must be square, not {phi.shape}")
    check_structure_matrix(phi)
    size = phi.rows
    structure = np.zeros((size, size, size), dtype=np.int64)
    structure[:, :, size - 1] = phi.entries
    return NilpotentAlgebra(structure, phi.p, family=(FAMILY_RANK1, phi))


def chain_algebra(n, p):
    """Basis e_i = z^(i+1), so e_i * e_j = e_(i+j+1) while i + j + 2 <= n."""
    if n < 1:
        raise DimensionMismatch(f"chain algebras need n >= 1, not {n}")
    structure = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n - 1 - i):
            structure[i, j, i + j + 1] = 1
    return NilpotentAlgebra(structure, p, family=(FAMILY_CHAIN, None))


def zero_algebra(n, p):
    return rank1_algebra(FpMatrix.zeros(n, n, p))
