"""Physical loss models.

Three families:

* Beer-Lambert Fock-state decay in a fiber — the binomial photon-number
  mixture ``rho(L) = sum_j C(N,j) q^j (1-q)^(N-j) |j><j|`` with survival
  probability ``q = exp(-Lambda L)`` and ``Lambda = ln(10) alpha / 10``;
* the two-arm detection mixture over the four photon-survival outcomes of
  an entangled pair sent through two independent lossy channels;
* a free-space-optical transmittance model combining atmospheric
  Beer-Lambert attenuation with the geometrical loss of a diverging
  Gaussian beam over a finite receiver aperture, including link-budget
  curve generation.

Units are SI meters for distances except where noted: fiber lengths are
kilometers (the customary unit alongside dB/km attenuation) and the FSO
attenuation coefficient is dB/km.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError
from .states import DensityMatrix

#: Column names for link-budget CSV output.
CURVE_CSV_HEADER = "z_m,atm_T,geo_eta,loss_db"

#: |total_loss_db + 10 log10(atm * geo)| must stay below this.
LOSS_DB_TOL = 1e-9


@dataclass(frozen=True)
class FiberParams:
    """Fiber propagation parameters: attenuation ``alpha`` in dB/km,
    ``length`` in km, initial photon number ``n_photons >= 1``."""

    alpha: float
    length: float
    n_photons: int

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"attenuation must be >= 0 dB/km, got {self.alpha}")
        if self.length < 0:
            raise ValueError(f"length must be >= 0 km, got {self.length}")
        if self.n_photons < 1:
            raise ValueError(f"photon number must be >= 1, got {self.n_photons}")


@dataclass(frozen=True)
class FsoParams:
    """Free-space link parameters.

    ``alpha`` is the atmospheric attenuation in dB/km; ``wavelength``,
    ``waist`` (initial beam waist w0) and ``aperture_radius`` are meters.
    A waist below ten wavelengths leaves the paraxial Gaussian-beam
    description questionable and triggers a warning.
    """

    alpha: float
    wavelength: float
    waist: float
    aperture_radius: float

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"attenuation must be >= 0 dB/km, got {self.alpha}")
        for name in ("wavelength", "waist", "aperture_radius"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be > 0 m, got {value}")
        if self.waist < 10 * self.wavelength:
            warnings.warn(
                f"waist {self.waist} m is below 10 wavelengths; the paraxial "
                "beam model is unreliable at this scale",
                stacklevel=2,
            )


@dataclass(frozen=True)
class LossMixture:
    """Four-outcome photon-detection decomposition for a two-arm link.

    ``pxy`` is the probability that arm A kept x photons and arm B kept y;
    ``state`` is the corresponding diagonal photon-number density matrix on
    dims (2, 2), basis order ``|n_A n_B>`` with A the slower index.
    """

    p11: float
    p01: float
    p10: float
    p00: float
    state: DensityMatrix

    def __post_init__(self):
        probs = (self.p11, self.p01, self.p10, self.p00)
        for p in probs:
            if not -1e-12 <= p <= 1 + 1e-12:
                raise ValueError(f"probability out of range: {p}")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ContractViolationError(
                f"detection probabilities sum to {sum(probs)}, not 1"
            )


@dataclass(frozen=True)
class LinkBudgetPoint:
    """One sample of an FSO link budget.

    ``total_loss_db`` always equals ``-10 log10(atm * geo)``; construction
    cross-checks this to guard against inconsistent hand-built points.
    """

    z: float
    atm_transmittance: float
    geo_efficiency: float
    total_loss_db: float

    def __post_init__(self):
        expected = -10.0 * math.log10(self.atm_transmittance * self.geo_efficiency)
        if abs(self.total_loss_db - expected) > LOSS_DB_TOL:
            raise ContractViolationError(
                f"total_loss_db {self.total_loss_db} inconsistent with "
                f"transmittances (expected {expected})"
            )


def lambda_coeff(alpha: float) -> float:
    """Convert dB/km attenuation to the exponential coefficient ln(10)*alpha/10."""
    if alpha < 0:
        raise ValueError(f"attenuation must be >= 0 dB/km, got {alpha}")
    return math.log(10.0) * alpha / 10.0


def fock_decay_state(p: FiberParams) -> DensityMatrix:
    """Photon-number state after fiber propagation: binomial over 0..N.

    Each of the N initial photons independently survives with probability
    ``q = exp(-Lambda L)``, so the output is diagonal with binomial weights
    ``C(N,j) q^j (1-q)^(N-j)``. For N = 1 this is the familiar
    ``(1-q)|0><0| + q|1><1|`` loss-channel output.
    """
    q = math.exp(-lambda_coeff(p.alpha) * p.length)
    n = p.n_photons
    weights = [math.comb(n, j) * q**j * (1.0 - q) ** (n - j) for j in range(n + 1)]
    return DensityMatrix(np.diag(weights).astype(complex), (n + 1,))


def two_arm_loss_mixture(t_a: float, t_b: float) -> LossMixture:
    """Detection mixture for independent single-photon loss on two arms.

    Closed form: ``p11 = t_a t_b``, ``p01 = (1-t_a) t_b``,
    ``p10 = t_a (1-t_b)``, ``p00 = (1-t_a)(1-t_b)``. The same mixture falls
    out of tensoring two Fock-space loss channels and applying them to
    ``|11><11|``; the two derivations are cross-checked in the test suite.
    """
    for name, t in (("t_a", t_a), ("t_b", t_b)):
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {t}")
    p11 = t_a * t_b
    p01 = (1.0 - t_a) * t_b
    p10 = t_a * (1.0 - t_b)
    p00 = (1.0 - t_a) * (1.0 - t_b)
    state = DensityMatrix(np.diag([p00, p01, p10, p11]).astype(complex), (2, 2))
    return LossMixture(p11=p11, p01=p01, p10=p10, p00=p00, state=state)


def rayleigh_range(waist: float, wavelength: float) -> float:
    """``z_R = pi w0^2 / lambda`` in meters."""
    if waist <= 0 or wavelength <= 0:
        raise ValueError("waist and wavelength must be > 0")
    return math.pi * waist**2 / wavelength


def beam_waist(z: float, p: FsoParams) -> float:
    """Gaussian beam radius ``w(z) = w0 sqrt(1 + (z/z_R)^2)`` at distance z (m)."""
    if z < 0:
        raise ValueError(f"distance must be >= 0 m, got {z}")
    z_r = rayleigh_range(p.waist, p.wavelength)
    return p.waist * math.sqrt(1.0 + (z / z_r) ** 2)


def geometrical_efficiency(z: float, p: FsoParams) -> float:
    """Fraction of the broadened beam collected by the receiver aperture.

    ``1 - exp(-2 a_R^2 / w(z)^2)``: the encircled power of a Gaussian beam
    of radius w(z) within a circular aperture of radius a_R. Decreases
    towards 0 as diffraction spreads the beam far beyond the aperture.
    """
    w = beam_waist(z, p)
    return -math.expm1(-2.0 * p.aperture_radius**2 / w**2)


def fso_transmittance(
    z: float, p: FsoParams, literal_exponent: bool = False
) -> LinkBudgetPoint:
    """Total FSO transmittance at distance ``z`` meters.

    The atmospheric factor is ``10^(-alpha z_km / 10)`` with alpha in dB/km
    — the convention under which 0.07 dB/km over 10 km costs 0.7 dB and
    which matches ``exp(-lambda_coeff(alpha) * z_km)``.
    ``literal_exponent=True`` instead uses ``10^(-alpha z_km)`` (no /10),
    a variant sometimes seen written without the dB normalization; it is
    provided for side-by-side comparison only.
    """
    if z < 0:
        raise ValueError(f"distance must be >= 0 m, got {z}")
    z_km = z / 1000.0
    exponent = -p.alpha * z_km if literal_exponent else -p.alpha * z_km / 10.0
    atm = 10.0**exponent
    geo = geometrical_efficiency(z, p)
    loss_db = -10.0 * math.log10(atm * geo) + 0.0
    return LinkBudgetPoint(
        z=z, atm_transmittance=atm, geo_efficiency=geo, total_loss_db=loss_db
    )


def link_budget_curve(
    p: FsoParams,
    z_max: float,
    step: float,
    include_geo: bool = True,
    literal_exponent: bool = False,
) -> list[LinkBudgetPoint]:
    """Link-budget samples at z = 0, step, 2*step, ..., z_max.

    The final point is forced at exactly ``z_max`` whether or not it is a
    multiple of ``step``. With ``include_geo=False`` the geometrical factor
    is pinned to 1, leaving the pure Beer-Lambert line (loss exactly linear
    in z); with it enabled the loss strictly dominates that line.
    """
    if z_max <= 0:
        raise ValueError(f"z_max must be > 0 m, got {z_max}")
    if not 0 < step <= z_max:
        raise ValueError(f"step must be in (0, z_max], got {step}")
    grid = []
    k = 0
    while True:
        z = k * step
        if z >= z_max - 1e-9 * step:
            break
        grid.append(z)
        k += 1
    grid.append(z_max)

    points = []
    for z in grid:
        full = fso_transmittance(z, p, literal_exponent=literal_exponent)
        if include_geo:
            points.append(full)
        else:
            atm = full.atm_transmittance
            points.append(
                LinkBudgetPoint(
                    z=z,
                    atm_transmittance=atm,
                    geo_efficiency=1.0,
                    total_loss_db=-10.0 * math.log10(atm) + 0.0,
                )
            )
    return points
