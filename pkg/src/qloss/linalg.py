"""Dense complex-matrix substrate for small quantum systems.

All states and operators in this package are plain ``numpy`` arrays of
``complex`` dtype. This module provides the handful of operations the rest
of the package builds on: Kronecker products with a dimension cap, partial
traces over tensor factors, and Hermitian eigendecomposition for small
dimensions (the largest object in the library is 16x16).
"""

from __future__ import annotations

import numpy as np

from .errors import ContractViolationError, DimensionError

#: Hard cap on the dimension produced by tensor products.
DEFAULT_DIM_CAP = 4096

#: Largest dimension accepted by the Hermitian eigensolver.
EIG_DIM_CAP = 16

#: Entrywise tolerance for treating a matrix as Hermitian.
HERMITICITY_TOL = 1e-10


def _readonly(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m

PAULI_X = _readonly(np.array([[0, 1], [1, 0]], dtype=complex))
PAULI_Y = _readonly(np.array([[0, -1j], [1j, 0]], dtype=complex))
PAULI_Z = _readonly(np.array([[1, 0], [0, -1]], dtype=complex))
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def identity(d: int) -> np.ndarray:
    """Complex identity matrix of dimension ``d``."""
    if d < 1:
        raise DimensionError(f"identity dimension must be positive, got {d}")
    return np.eye(d, dtype=complex)


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def as_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce ``m`` to a finite, 2-D complex array (copying the input)."""
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionError(f"{name} must be non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ContractViolationError(f"{name} contains non-finite entries")
    return arr


def hermiticity_defect(m: np.ndarray) -> float:
    """Max entrywise deviation of ``m`` from its conjugate transpose."""
    return float(np.max(np.abs(m - dagger(m))))


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return m.shape[0] == m.shape[1] and hermiticity_defect(m) <= tol


def kron(a, b, max_dim: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Kronecker (tensor) product of two complex matrices.

    The entry at row ``i1*b.rows + i2``, column ``j1*b.cols + j2`` equals
    ``a[i1, j1] * b[i2, j2]``; the left factor owns the coarse index.

    Raises
    ------
    DimensionError
        If either dimension of the product exceeds ``max_dim``.
    """
    a = as_complex_matrix(a, "left factor")
    b = as_complex_matrix(b, "right factor")
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise DimensionError(
            f"tensor product dimension {rows}x{cols} exceeds cap {max_dim}"
        )
    return np.kron(a, b)


def partial_trace(rho, dims, keep) -> np.ndarray:
    """Trace out all tensor factors of ``rho`` except those in ``keep``.

    Parameters
    ----------
    rho : array_like
        Square matrix on the tensor-product space described by ``dims``.
    dims : sequence of int
        Dimension of each tensor factor, in order; their product must equal
        the matrix dimension.
    keep : iterable of int
        Indices of the factors to retain. The result is ordered by ascending
        factor index.

    Returns
    -------
    numpy.ndarray
        Reduced matrix of dimension ``prod(dims[k] for k in keep)``. The
        trace of the input is preserved.
    """
    rho = as_complex_matrix(rho, "rho")
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"rho must be square, got shape {rho.shape}")
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise DimensionError(f"factor dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if total != rho.shape[0]:
        raise DimensionError(
            f"factor dimensions {dims} give total {total}, "
            f"but rho has dimension {rho.shape[0]}"
        )
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one tensor factor")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise DimensionError(f"keep indices {keep} out of range for {len(dims)} factors")

    traced = [i for i in range(len(dims)) if i not in keep]
    arr = rho.reshape(*dims, *dims)
    remaining = list(dims)
    for idx in sorted(traced, reverse=True):
        arr = np.trace(arr, axis1=idx, axis2=idx + len(remaining))
        del remaining[idx]
    d_out = int(np.prod(remaining))
    return arr.reshape(d_out, d_out)


def hermitian_eigenvalues(h) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending.

    Restricted to dimension <= 16; every state in this package fits. The
    input must be Hermitian within ``HERMITICITY_TOL`` entrywise, which all
    exact algebraic constructions in the library satisfy; a looser tolerance
    here would mask bugs upstream.

    Raises
    ------
    DimensionError
        If the matrix is not square or larger than the cap.
    ContractViolationError
        If the matrix is not Hermitian within tolerance.
    """
    h = as_complex_matrix(h, "h")
    if h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {h.shape}")
    if h.shape[0] > EIG_DIM_CAP:
        raise DimensionError(
            f"eigensolver supports dimension <= {EIG_DIM_CAP}, got {h.shape[0]}"
        )
    defect = hermiticity_defect(h)
    if defect > HERMITICITY_TOL:
        raise ContractViolationError(
            f"matrix is not Hermitian: entrywise defect {defect:.3e} "
            f"exceeds {HERMITICITY_TOL:.0e}"
        )
    return np.linalg.eigvalsh(h)
