"""qloss: lossy quantum channels on small dense matrices.

Kraus-operator channels (loss, depolarizing, polarization-aware loss),
validated density matrices with partial traces, CHSH/purity/entropy
metrics, fiber and free-space-optical loss models, and an executable
audit of a state-mistaken-for-operator loss pipeline.
"""

from .channels import (
    CptpReport,
    KrausChannel,
    apply_channel,
    depolarizing_channel,
    identity_channel,
    loss_channel,
    polarized_photon_loss_channel,
    tensor_channels,
    validate_cptp,
)
from .errors import ContractViolationError, DimensionError
from .lossmodels import (
    FiberParams,
    FsoParams,
    LinkBudgetPoint,
    LossMixture,
    fock_decay_state,
    fso_transmittance,
    geometrical_efficiency,
    lambda_coeff,
    link_budget_curve,
    two_arm_loss_mixture,
)
from .metrics import chsh_max, correlation_tensor, purity, von_neumann_entropy
from .states import (
    DensityMatrix,
    DensityViolationReport,
    bell_state,
    composite_state,
    fock_state,
    maximally_mixed,
    validate_density,
    werner_state,
)

__version__ = "0.1.0"

__all__ = [
    "ContractViolationError",
    "CptpReport",
    "DensityMatrix",
    "DensityViolationReport",
    "DimensionError",
    "FiberParams",
    "FsoParams",
    "KrausChannel",
    "LinkBudgetPoint",
    "LossMixture",
    "apply_channel",
    "bell_state",
    "chsh_max",
    "composite_state",
    "correlation_tensor",
    "depolarizing_channel",
    "fock_decay_state",
    "fock_state",
    "fso_transmittance",
    "geometrical_efficiency",
    "identity_channel",
    "lambda_coeff",
    "link_budget_curve",
    "loss_channel",
    "maximally_mixed",
    "polarized_photon_loss_channel",
    "purity",
    "tensor_channels",
    "two_arm_loss_mixture",
    "validate_cptp",
    "validate_density",
    "von_neumann_entropy",
    "werner_state",
]
