"""Quantum-state constructors and validation.

Basis conventions, used everywhere in the package:

* polarization qubits are ordered ``|H>`` then ``|V>``;
* Fock qubits are ordered ``|0>`` (vacuum) then ``|1>`` (one photon);
* in composite states the signal factor precedes the idler factor, and
  arm A precedes arm B.

A two-photon polarization state therefore lives on the basis
``|HH>, |HV>, |VH>, |VV>`` in that row/column order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionError

#: Entrywise Hermiticity tolerance for density-matrix validation.
HERMITICITY_TOL = 1e-10
#: Tolerance on |trace - 1|.
TRACE_TOL = 1e-10
#: Lower bound on the minimum eigenvalue (allows -1e-9 of round-off).
POSITIVITY_TOL = 1e-9

BELL_KINDS = ("phi_plus", "phi_minus", "psi_plus", "psi_minus")


@dataclass(frozen=True)
class DensityMatrix:
    """A square complex matrix with a tensor-factor dimension list.

    Construction checks only structural consistency (square shape, finite
    entries, factor dimensions multiplying to the matrix dimension). The
    physical invariants (Hermitian, unit trace, positive semidefinite) are
    checked by :func:`validate_density`, so that deliberately unphysical
    states, which the audit module must be able to build and inspect, remain
    representable. Such states carry ``non_physical=True``.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    non_physical: bool = False

    def __post_init__(self):
        m = linalg.as_complex_matrix(self.matrix, "density matrix")
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionError(f"dims must be positive integers, got {dims}")
        if math.prod(dims) != m.shape[0]:
            raise DimensionError(
                f"dims {dims} multiply to {math.prod(dims)}, "
                f"but the matrix has dimension {m.shape[0]}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def partial_trace(self, keep) -> "DensityMatrix":
        """Reduced state over the factors in ``keep`` (ascending order)."""
        reduced = linalg.partial_trace(self.matrix, self.dims, keep)
        kept = tuple(self.dims[k] for k in sorted(set(int(k) for k in keep)))
        return DensityMatrix(reduced, kept, non_physical=self.non_physical)

    def to_json_dict(self) -> dict:
        """Row-major ``{"dims": [...], "re": [[...]], "im": [[...]]}`` form."""
        return {
            "dims": list(self.dims),
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }


def bell_state(kind: str) -> DensityMatrix:
    """One of the four maximally entangled two-qubit states.

    ``kind`` is one of ``phi_plus``, ``phi_minus``, ``psi_plus``,
    ``psi_minus``. Entries are exact binary fractions (0.5), so partial
    traces reduce to exactly 0.5 * identity.
    """
    if kind not in BELL_KINDS:
        raise ValueError(f"unknown Bell state {kind!r}, expected one of {BELL_KINDS}")
    # support indices in the |HH>,|HV>,|VH>,|VV> basis and off-diagonal sign
    support, sign = {
        "phi_plus": ((0, 3), +1.0),
        "phi_minus": ((0, 3), -1.0),
        "psi_plus": ((1, 2), +1.0),
        "psi_minus": ((1, 2), -1.0),
    }[kind]
    i, j = support
    m = np.zeros((4, 4), dtype=complex)
    m[i, i] = m[j, j] = 0.5
    m[i, j] = m[j, i] = 0.5 * sign
    return DensityMatrix(m, (2, 2))


def fock_state(n: int) -> DensityMatrix:
    """Projector onto the zero- or one-photon Fock state (2x2, dims (2,))."""
    if n not in (0, 1):
        raise ValueError(
            f"fock_state supports n in {{0, 1}}, got {n}; "
            "multi-photon decay states are built by lossmodels.fock_decay_state"
        )
    m = np.zeros((2, 2), dtype=complex)
    m[n, n] = 1.0
    return DensityMatrix(m, (2,))


def maximally_mixed(dims) -> DensityMatrix:
    """Identity / dimension on the given tensor factors."""
    dims = tuple(int(d) for d in dims)
    d = math.prod(dims)
    return DensityMatrix(np.eye(d, dtype=complex) / d, dims)


def werner_state(w: float) -> DensityMatrix:
    """Mixture ``w * phi_plus + (1 - w) * I/4`` of a Bell state with white noise."""
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"mixing weight must be in [0, 1], got {w}")
    m = w * bell_state("phi_plus").matrix + (1.0 - w) * np.eye(4, dtype=complex) / 4.0
    return DensityMatrix(m, (2, 2))


def composite_state(
    pol: DensityMatrix, fock_s: DensityMatrix, fock_i: DensityMatrix
) -> DensityMatrix:
    """Polarization (x) signal-Fock (x) idler-Fock product state, 16x16.

    ``pol`` must be a two-qubit polarization state (dims ``(2, 2)``) and the
    Fock factors single qubits. The result has dims ``(2, 2, 2, 2)``.
    """
    if pol.dims != (2, 2):
        raise DimensionError(f"polarization factor must have dims (2, 2), got {pol.dims}")
    for name, f in (("signal", fock_s), ("idler", fock_i)):
        if f.dim != 2:
            raise DimensionError(f"{name} Fock factor must be 2x2, got dimension {f.dim}")
    m = linalg.kron(linalg.kron(pol.matrix, fock_s.matrix), fock_i.matrix)
    flagged = pol.non_physical or fock_s.non_physical or fock_i.non_physical
    return DensityMatrix(m, (2, 2, 2, 2), non_physical=flagged)


@dataclass(frozen=True)
class DensityViolation:
    """A single violated density-matrix invariant and its measured size."""

    invariant: str
    defect: float


@dataclass(frozen=True)
class DensityViolationReport:
    """Returned by :func:`validate_density` instead of raising.

    Violations are data here, not exceptions: the audit module constructs
    unphysical states on purpose and needs to report their defects.
    """

    violations: tuple[DensityViolation, ...]

    def defect(self, invariant: str) -> float | None:
        for v in self.violations:
            if v.invariant == invariant:
                return v.defect
        return None

    def violates(self, invariant: str) -> bool:
        return self.defect(invariant) is not None


def validate_density(
    m,
    dims,
    hermiticity_tol: float = HERMITICITY_TOL,
    trace_tol: float = TRACE_TOL,
    positivity_tol: float = POSITIVITY_TOL,
) -> DensityMatrix | DensityViolationReport:
    """Check the density-matrix invariants of ``m``.

    Returns a validated :class:`DensityMatrix` when ``m`` is Hermitian
    (entrywise within ``hermiticity_tol``), has unit trace (within
    ``trace_tol``) and is positive semidefinite (minimum eigenvalue above
    ``-positivity_tol``). Otherwise returns a
    :class:`DensityViolationReport` listing each violated invariant with its
    measured defect. The positivity check is skipped when the matrix is not
    Hermitian, since eigenvalues are then not real.
    """
    candidate = DensityMatrix(m, dims)
    violations = []

    herm_defect = linalg.hermiticity_defect(candidate.matrix)
    if herm_defect > hermiticity_tol:
        violations.append(DensityViolation("hermitian", herm_defect))

    trace_defect = abs(candidate.trace - 1.0)
    if trace_defect > trace_tol:
        violations.append(DensityViolation("unit_trace", trace_defect))

    if herm_defect <= hermiticity_tol:
        # eigenvalues of the Hermitian part; identical to the matrix within tol
        herm_part = 0.5 * (candidate.matrix + linalg.dagger(candidate.matrix))
        min_eig = float(linalg.hermitian_eigenvalues(herm_part)[0])
        if min_eig < -positivity_tol:
            violations.append(DensityViolation("positive_semidefinite", -min_eig))

    if violations:
        return DensityViolationReport(tuple(violations))
    return candidate
