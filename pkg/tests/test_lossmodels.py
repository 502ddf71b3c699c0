import math

import numpy as np
import pytest

from qloss import linalg, metrics
from qloss.channels import apply_channel, loss_channel, tensor_channels
from qloss.errors import ContractViolationError
from qloss.lossmodels import (
    FiberParams,
    FsoParams,
    LinkBudgetPoint,
    LossMixture,
    beam_waist,
    fock_decay_state,
    fso_transmittance,
    geometrical_efficiency,
    lambda_coeff,
    link_budget_curve,
    rayleigh_range,
    two_arm_loss_mixture,
)
from qloss.states import DensityMatrix, fock_state

FIG_PARAMS = dict(alpha=0.07, wavelength=1.55e-6, waist=0.01)


# ------------------------------------------------------------------- lambda


def test_lambda_coeff_values():
    assert lambda_coeff(0.07) == pytest.approx(0.01611809565095832, abs=1e-15)
    assert lambda_coeff(0.0) == 0.0
    assert lambda_coeff(10.0 / math.log(10.0)) == pytest.approx(1.0, abs=1e-12)


def test_lambda_coeff_rejects_negative():
    with pytest.raises(ValueError):
        lambda_coeff(-0.01)


# --------------------------------------------------------------- fock decay


def test_single_photon_decay_matches_loss_channel_form():
    p = FiberParams(alpha=0.2, length=15.0, n_photons=1)
    q = math.exp(-lambda_coeff(0.2) * 15.0)
    rho = fock_decay_state(p)
    assert np.max(np.abs(rho.matrix - np.diag([1 - q, q]))) <= 1e-15
    assert rho.dims == (2,)


def test_zero_length_keeps_initial_fock_state():
    for n in (1, 2, 5):
        rho = fock_decay_state(FiberParams(alpha=0.07, length=0.0, n_photons=n))
        expected = np.zeros(n + 1)
        expected[n] = 1.0
        assert np.max(np.abs(rho.matrix - np.diag(expected))) == 0.0


def test_two_photon_half_survival():
    # L chosen so q = exp(-Lambda L) = 0.5
    alpha = 0.07
    length = math.log(2.0) / lambda_coeff(alpha)
    rho = fock_decay_state(FiberParams(alpha=alpha, length=length, n_photons=2))
    assert np.max(np.abs(rho.matrix - np.diag([0.25, 0.5, 0.25]))) <= 1e-12


def test_two_photon_half_survival_against_bernoulli_oracle():
    rng = np.random.default_rng(2024)
    trials = 10**6
    survivors = rng.binomial(2, 0.5, trials)
    for j, weight in enumerate((0.25, 0.5, 0.25)):
        observed = np.mean(survivors == j)
        se = math.sqrt(weight * (1 - weight) / trials)
        assert abs(observed - weight) <= 3 * se


def test_decay_weights_sum_to_one():
    for n in (1, 5, 12, 20):
        for scaled_length in (0.0, 0.5, 3.0, 20.0):
            alpha = 1.0
            length = scaled_length / lambda_coeff(alpha)
            rho = fock_decay_state(FiberParams(alpha=alpha, length=length, n_photons=n))
            assert abs(rho.trace.real - 1.0) <= 1e-12


def test_purity_minimum_and_entropy_maximum_at_half_survival():
    alpha = 0.07
    length = math.log(2.0) / lambda_coeff(alpha)  # q = 1/2
    rho = fock_decay_state(FiberParams(alpha=alpha, length=length, n_photons=1))
    assert metrics.purity(rho) == pytest.approx(0.5, abs=1e-12)
    assert metrics.von_neumann_entropy(rho) == pytest.approx(1.0, abs=1e-12)


def test_fiber_params_validation():
    with pytest.raises(ValueError):
        FiberParams(alpha=-0.1, length=1.0, n_photons=1)
    with pytest.raises(ValueError):
        FiberParams(alpha=0.1, length=-1.0, n_photons=1)
    with pytest.raises(ValueError):
        FiberParams(alpha=0.1, length=1.0, n_photons=0)


# ----------------------------------------------------------- two-arm mixture


def test_two_arm_lossless():
    mix = two_arm_loss_mixture(1.0, 1.0)
    assert mix.p11 == 1.0 and mix.p01 == 0.0 and mix.p10 == 0.0 and mix.p00 == 0.0
    expected = np.zeros((4, 4))
    expected[3, 3] = 1.0
    assert np.max(np.abs(mix.state.matrix - expected)) == 0.0


def test_two_arm_example_values():
    mix = two_arm_loss_mixture(0.6, 0.5)
    assert mix.p11 == pytest.approx(0.30, abs=1e-12)
    assert mix.p01 == pytest.approx(0.20, abs=1e-12)
    assert mix.p10 == pytest.approx(0.30, abs=1e-12)
    assert mix.p00 == pytest.approx(0.20, abs=1e-12)


def test_two_arm_single_lossy_arm_marginal():
    eta = 0.35
    mix = two_arm_loss_mixture(eta, 1.0)
    assert mix.p11 == pytest.approx(eta, abs=1e-15)
    assert mix.p01 == pytest.approx(1 - eta, abs=1e-15)
    assert mix.p10 == 0.0 and mix.p00 == 0.0


def test_two_arm_matches_tensored_loss_channels():
    both = DensityMatrix(
        linalg.kron(fock_state(1).matrix, fock_state(1).matrix), (2, 2)
    )
    for t_a in (0.0, 0.3, 0.6, 1.0):
        for t_b in (0.0, 0.3, 0.6, 1.0):
            channel = tensor_channels(loss_channel(t_a), loss_channel(t_b))
            out = apply_channel(channel, both)
            mix = two_arm_loss_mixture(t_a, t_b)
            assert np.max(np.abs(out.matrix - mix.state.matrix)) <= 1e-12


def test_two_arm_against_bernoulli_oracle():
    rng = np.random.default_rng(99)
    trials = 10**6
    t_a, t_b = 0.6, 0.5
    kept_a = rng.random(trials) < t_a
    kept_b = rng.random(trials) < t_b
    mix = two_arm_loss_mixture(t_a, t_b)
    for expected, mask in (
        (mix.p11, kept_a & kept_b),
        (mix.p01, ~kept_a & kept_b),
        (mix.p10, kept_a & ~kept_b),
        (mix.p00, ~kept_a & ~kept_b),
    ):
        observed = float(np.mean(mask))
        se = math.sqrt(expected * (1 - expected) / trials)
        assert abs(observed - expected) <= 3 * se


def test_two_arm_rejects_out_of_range():
    with pytest.raises(ValueError):
        two_arm_loss_mixture(-0.1, 0.5)
    with pytest.raises(ValueError):
        two_arm_loss_mixture(0.5, 1.2)


def test_loss_mixture_guards_probability_sum():
    state = DensityMatrix(np.diag([0.25, 0.25, 0.25, 0.25]).astype(complex), (2, 2))
    with pytest.raises(ContractViolationError):
        LossMixture(p11=0.5, p01=0.5, p10=0.5, p00=0.5, state=state)


# ------------------------------------------------------------- beam geometry


def test_rayleigh_range_value():
    assert rayleigh_range(0.01, 1.55e-6) == pytest.approx(202.6833970057931, abs=1e-9)


def test_rayleigh_range_scales_quadratically():
    assert rayleigh_range(0.02, 1.55e-6) == pytest.approx(
        4 * rayleigh_range(0.01, 1.55e-6), rel=1e-14
    )


def test_rayleigh_range_inverse_relation():
    lam = 1.55e-6
    assert rayleigh_range(math.sqrt(lam / math.pi), lam) == pytest.approx(1.0, rel=1e-12)


def test_beam_waist_landmarks():
    p = FsoParams(aperture_radius=0.5, **FIG_PARAMS)
    assert beam_waist(0.0, p) == p.waist
    z_r = rayleigh_range(p.waist, p.wavelength)
    assert beam_waist(z_r, p) == pytest.approx(p.waist * math.sqrt(2.0), rel=1e-14)
    assert beam_waist(10000.0, p) == pytest.approx(0.4934816548775816, abs=1e-12)


def test_beam_waist_monotone():
    p = FsoParams(aperture_radius=0.5, **FIG_PARAMS)
    samples = [beam_waist(z, p) for z in np.linspace(0.0, 50000.0, 40)]
    assert all(b > a for a, b in zip(samples, samples[1:]))


def test_geometrical_efficiency_values():
    p05 = FsoParams(aperture_radius=0.5, **FIG_PARAMS)
    p02 = FsoParams(aperture_radius=0.2, **FIG_PARAMS)
    assert geometrical_efficiency(0.0, p02) == pytest.approx(1.0, abs=1e-12)
    assert geometrical_efficiency(10000.0, p05) == pytest.approx(
        0.8716744021159268, abs=1e-12
    )
    assert geometrical_efficiency(10000.0, p02) == pytest.approx(
        0.28000392748352565, abs=1e-12
    )


def test_geometrical_efficiency_decreasing_once_beam_outgrows_aperture():
    p = FsoParams(aperture_radius=0.2, **FIG_PARAMS)
    zs = np.arange(2500.0, 50001.0, 2500.0)
    values = [geometrical_efficiency(z, p) for z in zs]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_geometrical_efficiency_saturates_with_huge_aperture():
    p = FsoParams(alpha=0.07, wavelength=1.55e-6, waist=0.01, aperture_radius=1000.0)
    assert abs(geometrical_efficiency(10000.0, p) - 1.0) <= 1e-6


def test_fso_params_validation_and_warning():
    with pytest.raises(ValueError):
        FsoParams(alpha=0.07, wavelength=-1e-6, waist=0.01, aperture_radius=0.5)
    with pytest.raises(ValueError):
        FsoParams(alpha=-0.1, wavelength=1.55e-6, waist=0.01, aperture_radius=0.5)
    with pytest.warns(UserWarning):
        FsoParams(alpha=0.07, wavelength=1.55e-6, waist=1e-5, aperture_radius=0.5)


# ---------------------------------------------------------------- link budget


def test_transmittance_reference_points():
    p05 = FsoParams(aperture_radius=0.5, **FIG_PARAMS)
    p02 = FsoParams(aperture_radius=0.2, **FIG_PARAMS)
    assert fso_transmittance(10000.0, p05).total_loss_db == pytest.approx(
        1.2964570746510092, abs=1e-9
    )
    assert fso_transmittance(10000.0, p02).total_loss_db == pytest.approx(
        6.228358769704219, abs=1e-9
    )


def test_transmittance_atmospheric_factor_is_db_consistent():
    p = FsoParams(aperture_radius=0.5, **FIG_PARAMS)
    point = fso_transmittance(10000.0, p)
    assert point.atm_transmittance == pytest.approx(10 ** (-0.07 * 10 / 10), rel=1e-14)
    # the dB-consistent form coincides with exp(-Lambda z)
    assert point.atm_transmittance == pytest.approx(
        math.exp(-lambda_coeff(0.07) * 10.0), rel=1e-12
    )


def test_transmittance_literal_exponent_variant():
    p = FsoParams(aperture_radius=0.5, **FIG_PARAMS)
    point = fso_transmittance(10000.0, p, literal_exponent=True)
    assert point.atm_transmittance == pytest.approx(10 ** (-0.07 * 10), rel=1e-14)


def test_baseline_curve_is_linear_in_distance():
    p = FsoParams(aperture_radius=0.5, **FIG_PARAMS)
    for point in link_budget_curve(p, z_max=50000.0, step=5000.0, include_geo=False):
        assert point.geo_efficiency == 1.0
        assert point.total_loss_db == pytest.approx(0.07 * point.z / 1000.0, abs=1e-9)


def test_curve_with_geometry_dominates_baseline():
    p = FsoParams(aperture_radius=0.5, **FIG_PARAMS)
    improved = link_budget_curve(p, z_max=50000.0, step=2500.0, include_geo=True)
    baseline = link_budget_curve(p, z_max=50000.0, step=2500.0, include_geo=False)
    for imp, base in zip(improved[1:], baseline[1:]):  # skip z = 0
        assert imp.total_loss_db > base.total_loss_db


def test_larger_aperture_loses_less():
    p05 = FsoParams(aperture_radius=0.5, **FIG_PARAMS)
    p02 = FsoParams(aperture_radius=0.2, **FIG_PARAMS)
    curve05 = link_budget_curve(p05, z_max=50000.0, step=2500.0)
    curve02 = link_budget_curve(p02, z_max=50000.0, step=2500.0)
    for a05, a02 in zip(curve05[1:], curve02[1:]):
        assert a05.total_loss_db < a02.total_loss_db


def test_curve_grid_endpoint_forced():
    p = FsoParams(aperture_radius=0.5, **FIG_PARAMS)
    curve = link_budget_curve(p, z_max=1050.0, step=100.0)
    zs = [point.z for point in curve]
    assert zs[:3] == [0.0, 100.0, 200.0]
    assert zs[-2:] == [1000.0, 1050.0]
    exact = link_budget_curve(p, z_max=1000.0, step=100.0)
    assert [point.z for point in exact] == [100.0 * k for k in range(11)]


def test_curve_rejects_bad_grid():
    p = FsoParams(aperture_radius=0.5, **FIG_PARAMS)
    with pytest.raises(ValueError):
        link_budget_curve(p, z_max=0.0, step=100.0)
    with pytest.raises(ValueError):
        link_budget_curve(p, z_max=1000.0, step=2000.0)


def test_link_budget_point_cross_checks_loss():
    with pytest.raises(ContractViolationError):
        LinkBudgetPoint(
            z=0.0, atm_transmittance=0.5, geo_efficiency=1.0, total_loss_db=0.0
        )
