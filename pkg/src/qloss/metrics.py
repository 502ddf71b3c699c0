"""State metrics: purity, von Neumann entropy, and the two-qubit CHSH bound.

The CHSH bound follows the correlation-matrix criterion: build the 3x3
matrix ``T_ij = Tr[rho (sigma_i (x) sigma_j)]``, take the two largest
eigenvalues ``m1 >= m2`` of ``T^T T``, and the maximal CHSH value over all
measurement settings is ``2 sqrt(m1 + m2)``. Values above 2 certify that
some setting violates the classical bound.
"""

from __future__ import annotations

import math

import numpy as np

from . import linalg
from .errors import DimensionError
from .states import DensityMatrix

#: Eigenvalues below this are treated as exact zeros in the entropy sum.
ENTROPY_EIG_FLOOR = 1e-12


def purity(rho: DensityMatrix) -> float:
    """``Tr[rho^2]``; 1 for pure states, ``1/d`` for maximally mixed."""
    return float(np.trace(rho.matrix @ rho.matrix).real)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy ``-sum_k lambda_k log2 lambda_k`` in bits.

    Eigenvalues below ``ENTROPY_EIG_FLOOR`` (including small negatives from
    round-off) are dropped from the sum, and the result is clamped at zero.
    """
    eigs = linalg.hermitian_eigenvalues(rho.matrix)
    total = 0.0
    for lam in eigs:
        if lam > ENTROPY_EIG_FLOOR:
            total -= lam * math.log2(lam)
    return max(total, 0.0)


def correlation_tensor(rho: DensityMatrix) -> np.ndarray:
    """The real 3x3 matrix ``T_ij = Tr[rho (sigma_i (x) sigma_j)]``.

    Requires a two-qubit state with dims ``(2, 2)``.
    """
    if rho.dims != (2, 2):
        raise DimensionError(
            f"correlation tensor needs a two-qubit state with dims (2, 2), "
            f"got dims {rho.dims}"
        )
    t = np.empty((3, 3), dtype=float)
    for i, si in enumerate(linalg.PAULIS):
        for j, sj in enumerate(linalg.PAULIS):
            t[i, j] = float(np.trace(rho.matrix @ linalg.kron(si, sj)).real)
    return t


def chsh_max(rho: DensityMatrix) -> float:
    """Maximal CHSH expectation ``2 sqrt(m1 + m2)`` over all settings.

    ``m1, m2`` are the two largest eigenvalues of ``T^T T`` with ``T`` the
    correlation tensor. Equals ``2 sqrt 2`` for any Bell state and ``w``
    times that for the corresponding isotropic mixture of weight ``w``.
    """
    t = correlation_tensor(rho)
    eigs = linalg.hermitian_eigenvalues(t.T @ t)
    top_two = float(eigs[-1] + eigs[-2])
    return 2.0 * math.sqrt(max(top_two, 0.0))
