"""Kraus channels: representation, CPTP validation, and the standard loss
and noise channels of the library.

A quantum operation is represented by an ordered set of Kraus operators
``{K_a}`` acting as ``rho -> sum_a K_a rho K_a^dag`` (operator on the left,
adjoint on the right). The map is a physical channel, completely positive
and trace preserving, exactly when the completeness sum ``sum_a K_a^dag K_a``
equals the identity. Complete positivity is automatic for any map written in
Kraus form, so validity reduces to that single completeness check.

Channels that fail the check are deliberately representable and applicable:
the audit module runs a known-invalid single-operator "channel" exactly as
written in the model it dissects, and the resulting states are flagged
``non_physical`` rather than rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionError
from .states import DensityMatrix

#: Default tolerance on the completeness defect.
CPTP_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """An ordered list of Kraus operators with shared dimensions.

    All operators must share one shape ``(d_out, d_in)``; the dimensions are
    derived from the first operator. Operators are copied and frozen.
    """

    operators: tuple[np.ndarray, ...]
    d_in: int = field(init=False)
    d_out: int = field(init=False)

    def __post_init__(self):
        ops = tuple(
            linalg.as_complex_matrix(op, f"Kraus operator {i}")
            for i, op in enumerate(self.operators)
        )
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        for i, op in enumerate(ops):
            if op.shape != shape:
                raise DimensionError(
                    f"Kraus operator {i} has shape {op.shape}, expected {shape}"
                )
            op.setflags(write=False)
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "d_out", shape[0])
        object.__setattr__(self, "d_in", shape[1])

    def to_json_dict(self) -> dict:
        return {
            "d_in": self.d_in,
            "d_out": self.d_out,
            "operators": [
                {"re": op.real.tolist(), "im": op.imag.tolist()}
                for op in self.operators
            ],
        }


@dataclass(frozen=True)
class CptpReport:
    """Result of the completeness check ``sum K^dag K = I``.

    ``completeness_defect`` is the max entrywise deviation from the identity.
    ``is_trace_preserving`` and ``is_valid`` coincide for Kraus-form maps,
    where complete positivity holds by construction.
    """

    completeness_defect: float
    is_trace_preserving: bool
    is_valid: bool

    def to_json_dict(self) -> dict:
        return {
            "completeness_defect": self.completeness_defect,
            "is_trace_preserving": self.is_trace_preserving,
            "is_valid": self.is_valid,
        }


def validate_cptp(channel: KrausChannel, tol: float = CPTP_TOL) -> CptpReport:
    """Measure the completeness defect of ``channel`` against tolerance ``tol``."""
    total = np.zeros((channel.d_in, channel.d_in), dtype=complex)
    for op in channel.operators:
        total += linalg.dagger(op) @ op
    defect = float(np.max(np.abs(total - np.eye(channel.d_in))))
    ok = defect <= tol
    return CptpReport(completeness_defect=defect, is_trace_preserving=ok, is_valid=ok)


def apply_channel(
    channel: KrausChannel, rho: DensityMatrix, cptp_tol: float = CPTP_TOL
) -> DensityMatrix:
    """Apply ``rho -> sum_a K_a rho K_a^dag``.

    The trace is preserved (within round-off) when the channel passes the
    completeness check. Applying a channel that fails the check is allowed;
    the output is then flagged ``non_physical``, and the flag also sticks if
    the input already carried it.
    """
    if rho.dim != channel.d_in:
        raise DimensionError(
            f"state dimension {rho.dim} does not match channel input {channel.d_in}"
        )
    out = np.zeros((channel.d_out, channel.d_out), dtype=complex)
    for op in channel.operators:
        out += op @ rho.matrix @ linalg.dagger(op)
    dims = rho.dims if channel.d_out == channel.d_in else (channel.d_out,)
    physical = validate_cptp(channel, cptp_tol).is_valid
    return DensityMatrix(out, dims, non_physical=rho.non_physical or not physical)


def identity_channel(d: int = 2) -> KrausChannel:
    """The trivial channel ``{I_d}``."""
    return KrausChannel((linalg.identity(d),))


def loss_channel(eta: float) -> KrausChannel:
    """Photon-loss channel on the one-photon Fock space, transmittance ``eta``.

    Two operators on the ``{|0>, |1>}`` basis:

    * ``K0 = sqrt(1 - eta) |0><1|``, the photon is absorbed;
    * ``K1 = |0><0| + sqrt(eta) |1><1|``, the photon survives.

    Acting on ``|1><1|`` this produces
    ``(1 - eta)|0><0| + eta |1><1|``; the vacuum is a fixed point, and
    ``eta = 1`` reduces to the identity.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmittance must be in [0, 1], got {eta}")
    k0 = np.array([[0.0, math.sqrt(1.0 - eta)], [0.0, 0.0]], dtype=complex)
    k1 = np.array([[1.0, 0.0], [0.0, math.sqrt(eta)]], dtype=complex)
    return KrausChannel((k0, k1))


def depolarizing_channel(p: float) -> KrausChannel:
    """Qubit depolarizing channel, ``rho -> (1 - p) rho + p I/2``.

    Kraus set ``{sqrt(1 - 3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}``,
    the textbook parametrization.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing probability must be in [0, 1], got {p}")
    c0 = math.sqrt(1.0 - 3.0 * p / 4.0)
    c1 = math.sqrt(p / 4.0)
    ops = (c0 * linalg.identity(2),) + tuple(c1 * s for s in linalg.PAULIS)
    return KrausChannel(ops)


def polarized_photon_loss_channel(t: float) -> KrausChannel:
    """Single-arm loss acting jointly on photon presence and polarization.

    Loss of a photon cannot leave its polarization state untouched, so the
    arm is modeled on a 3-level space ordered ``{|vac>, |H>, |V>}`` in which
    the vacuum is an explicit orthogonal level. Three operators:

    * ``K_a = sqrt(1 - t) |vac><H|`` (an H photon is lost),
    * ``K_b = sqrt(1 - t) |vac><V|`` (a V photon is lost),
    * ``K_c = |vac><vac| + sqrt(t) (|H><H| + |V><V|)`` (survival).

    Tensoring two of these over both arms of an entangled pair produces the
    four-outcome detection mixture with weights ``t_a t_b``,
    ``(1-t_a) t_b``, ``t_a (1-t_b)`` and ``(1-t_a)(1-t_b)``, and the
    surviving single photon in a one-photon sector is maximally mixed.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"transmittance must be in [0, 1], got {t}")
    root_s = math.sqrt(t)
    root_l = math.sqrt(1.0 - t)
    k_a = np.zeros((3, 3), dtype=complex)
    k_a[0, 1] = root_l
    k_b = np.zeros((3, 3), dtype=complex)
    k_b[0, 2] = root_l
    k_c = np.diag([1.0, root_s, root_s]).astype(complex)
    return KrausChannel((k_a, k_b, k_c))


def tensor_channels(
    a: KrausChannel, b: KrausChannel, max_dim: int = linalg.DEFAULT_DIM_CAP
) -> KrausChannel:
    """Channel acting independently on two subsystems.

    The Kraus set is all pairwise Kronecker products ``A_i (x) B_j``; when
    both inputs satisfy completeness so does the product, since
    ``sum_ij (A_i (x) B_j)^dag (A_i (x) B_j) = (sum A^dag A) (x) (sum B^dag B)``.
    """
    ops = tuple(
        linalg.kron(op_a, op_b, max_dim=max_dim)
        for op_a in a.operators
        for op_b in b.operators
    )
    return KrausChannel(ops)
