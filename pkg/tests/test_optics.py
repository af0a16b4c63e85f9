import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paddlesat import optics
from paddlesat.optics import BeamProfile, JitterSpec, OpticalTxSpec, ReceiverSpec
from paddlesat.units import DomainError

TX = OpticalTxSpec()


def test_diffraction_divergence():
    assert optics.diffraction_divergence(TX) == pytest.approx(1.594e-5, rel=1e-3)
    assert optics.diffraction_divergence(TX) == pytest.approx(16e-6, rel=0.02)
    wide = OpticalTxSpec(aperture_diameter=0.30)
    assert optics.diffraction_divergence(wide) == pytest.approx(optics.diffraction_divergence(TX) / 2, rel=1e-15)
    assert optics.diffraction_divergence(OpticalTxSpec(wavelength=1550e-9)) == pytest.approx(25.21333333e-6, rel=1e-9)


def test_divergence_below_limit_rejected():
    with pytest.raises(DomainError, match="diffraction"):
        OpticalTxSpec(design_divergence=10e-6)
    with pytest.raises(DomainError):
        OpticalTxSpec(aperture_diameter=0.0)
    with pytest.raises(ValueError):
        OpticalTxSpec(beam_profile="top_hat")


def test_spot_diameter():
    assert optics.spot_diameter(200e-6, 500.0) == pytest.approx(0.10, rel=1e-12)
    assert optics.spot_diameter(16e-6, 500.0) == pytest.approx(0.008, rel=1e-12)
    assert optics.spot_diameter(200e-6, 0.0) == 0.0


@given(st.floats(min_value=0, max_value=1e-3), st.floats(min_value=0, max_value=1e4))
def test_spot_and_lateral_linear_in_range(theta, sep):
    assert optics.spot_diameter(theta, 3 * sep) == pytest.approx(3 * optics.spot_diameter(theta, sep), rel=1e-15)
    assert optics.lateral_error(theta, 3 * sep) == pytest.approx(3 * optics.lateral_error(theta, sep), rel=1e-15)


def test_combined_jitter():
    assert optics.combined_jitter(JitterSpec(250e-6, 1000e-6)) == pytest.approx(1030.7764064044e-6, rel=1e-12)
    assert optics.combined_jitter(JitterSpec(250e-6, 0.0)) == 250e-6
    assert optics.combined_jitter(JitterSpec(3e-6, 7e-6)) == optics.combined_jitter(JitterSpec(7e-6, 3e-6))
    with pytest.raises(DomainError):
        JitterSpec(-1e-6, 0.0)


def test_lateral_error():
    sigma = optics.combined_jitter(JitterSpec(250e-6, 1000e-6))
    assert optics.lateral_error(sigma, 500.0) == pytest.approx(0.515, rel=0.005)
    assert optics.lateral_error(sigma, 0.0) == 0.0
    assert optics.lateral_error(20e-6, 500.0) == pytest.approx(0.010, rel=1e-12)


# -- static capture ------------------------------------------------------------


def _flat(beam_radius, rx_radius):
    """Spec pair whose flat-top beam has the given radius at 500 m."""
    tx = OpticalTxSpec(design_divergence=2 * beam_radius / 500.0)
    return tx, ReceiverSpec(rx_radius, 500.0)


def test_flat_top_full_and_zero():
    tx, rx = _flat(0.05, 0.06)
    assert optics.capture_fraction_static(tx, rx, 0.0) == 1.0
    assert optics.capture_fraction_static(tx, rx, 0.11) == 0.0
    assert optics.capture_fraction_static(tx, rx, 1.0) == 0.0


def test_flat_top_small_receiver_centered():
    tx, rx = _flat(0.05, 0.025)
    assert optics.capture_fraction_static(tx, rx, 0.0) == pytest.approx(0.25, rel=1e-14)


def test_flat_top_lens_against_point_sampling():
    tx, rx = _flat(0.05, 0.05)
    value = optics.capture_fraction_static(tx, rx, 0.05)
    # closed-form lens area of two equal disks, evaluated with mpmath
    assert value == pytest.approx(0.391002218955770642, rel=1e-12)
    rng = np.random.default_rng(7)
    n = 4_000_000
    r = 0.05 * np.sqrt(rng.random(n))
    phi = 2 * math.pi * rng.random(n)
    hits = np.hypot(r * np.cos(phi) - 0.05, r * np.sin(phi)) <= 0.05
    assert abs(hits.mean() - value) < 1e-3


def test_gaussian_static_against_noncentral_chi2():
    from scipy.stats import ncx2

    tx = OpticalTxSpec(design_divergence=200e-6, beam_profile=BeamProfile.GAUSSIAN)
    rx = ReceiverSpec(0.04, 500.0)
    sigma = 0.1 / 4
    for d in (0.0, 0.01, 0.04, 0.09, 0.2):
        expected = ncx2.cdf((0.04 / sigma) ** 2, 2, (d / sigma) ** 2) if d > 0 else 1 - math.exp(-0.5 * (0.04 / sigma) ** 2)
        assert optics.capture_fraction_static(tx, rx, d) == pytest.approx(expected, abs=1e-12)


profiles = st.sampled_from([BeamProfile.FLAT_TOP, BeamProfile.GAUSSIAN])


@settings(max_examples=60, deadline=None)
@given(
    profiles,
    st.floats(min_value=20e-6, max_value=2e-3),
    st.floats(min_value=1e-3, max_value=1.0),
    st.floats(min_value=0, max_value=1.0),
    st.floats(min_value=0, max_value=0.5),
    st.floats(min_value=0, max_value=0.5),
)
def test_static_capture_properties(profile, theta, radius, offset, d_off, d_rad):
    tx = OpticalTxSpec(design_divergence=theta, beam_profile=profile)
    rx = ReceiverSpec(radius, 500.0)
    f = optics.capture_fraction_static(tx, rx, offset)
    assert 0.0 <= f <= 1.0
    assert optics.capture_fraction_static(tx, rx, offset + d_off) <= f + 1e-12
    assert optics.capture_fraction_static(tx, ReceiverSpec(radius + d_rad, 500.0), offset) >= f - 1e-12


def test_static_rejects_negative_offset():
    with pytest.raises(DomainError):
        optics.capture_fraction_static(TX, ReceiverSpec(0.1, 500.0), -0.01)


# -- jittered capture ------------------------------------------------------------


def test_zero_jitter_is_static():
    tx, rx = _flat(0.05, 0.03)
    est = optics.capture_fraction_jittered(tx, rx, JitterSpec(0.0, 0.0), 1000, seed=1)
    assert est.mean_fraction == optics.capture_fraction_static(tx, rx, 0.0)
    assert est.stderr == 0.0
    assert est.method is optics.CaptureMethod.MONTE_CARLO


def test_large_receiver_full_capture():
    j = JitterSpec(250e-6, 1000e-6)
    sigma_r = optics.lateral_error(optics.combined_jitter(j), 500.0)
    tx = OpticalTxSpec()
    rx = ReceiverSpec(10 * sigma_r + 0.05, 500.0)
    est = optics.capture_fraction_jittered(tx, rx, j, 20_000, seed=3)
    assert est.mean_fraction >= 0.999


def _rayleigh_case():
    # beam radius 1e-6 of the receiver: effectively a point
    rx = ReceiverSpec(0.5, 500.0)
    tx = OpticalTxSpec(wavelength=1e-9, aperture_diameter=10.0, design_divergence=2 * 0.5e-6 / 500.0)
    beam_r = tx.design_divergence * 500.0 / 2
    sigma_theta = 0.5 / 500.0
    return tx, rx, JitterSpec(sigma_theta, 0.0), beam_r


def test_rayleigh_oracle():
    tx, rx, j, beam_r = _rayleigh_case()
    assert beam_r <= 1e-6 * rx.radius * (1 + 1e-12)
    est = optics.capture_fraction_jittered(tx, rx, j, 100_000, seed=11)
    oracle = 1 - math.exp(-0.5)
    assert abs(est.mean_fraction - oracle) <= 3 * est.stderr


def test_reproducible_and_worker_independent():
    tx, rx, j, _ = _rayleigh_case()
    a = optics.capture_fraction_jittered(tx, rx, j, 70_000, seed=5)
    b = optics.capture_fraction_jittered(tx, rx, j, 70_000, seed=5)
    c = optics.capture_fraction_jittered(tx, rx, j, 70_000, seed=5, workers=3)
    assert a == b == c
    d = optics.capture_fraction_jittered(tx, rx, j, 70_000, seed=6)
    assert d.mean_fraction != a.mean_fraction


def test_stderr_scaling():
    tx, rx, j, _ = _rayleigh_case()
    small = optics.capture_fraction_jittered(tx, rx, j, 2_000, seed=2)
    big = optics.capture_fraction_jittered(tx, rx, j, 200_000, seed=2)
    ratio = small.stderr / big.stderr
    assert 10 / 2 <= ratio <= 10 * 2


def test_converges_to_static_as_jitter_vanishes():
    tx = OpticalTxSpec(beam_profile=BeamProfile.GAUSSIAN)
    rx = ReceiverSpec(0.04, 500.0)
    static = optics.capture_fraction_static(tx, rx, 0.0)
    errs = []
    for s in (1e-6, 1e-7, 1e-8):
        est = optics.capture_fraction_jittered(tx, rx, JitterSpec(s, 0.0), 5_000, seed=9)
        errs.append(abs(est.mean_fraction - static))
    assert errs[-1] < 1e-6
    assert errs[0] >= errs[-1]


def test_samples_must_be_positive():
    with pytest.raises(DomainError):
        optics.capture_fraction_jittered(TX, ReceiverSpec(0.1, 500.0), JitterSpec(1e-6, 0), 0, seed=1)


def test_single_sample():
    est = optics.capture_fraction_jittered(TX, ReceiverSpec(0.1, 500.0), JitterSpec(1e-4, 0), 1, seed=1)
    assert est.sample_count == 1 and est.stderr == 0.0


def test_doppler():
    assert optics.doppler_wavelength_shift(980e-9, 0.0) == 0.0
    # 980 nm * 7500 / c, mpmath
    assert optics.doppler_wavelength_shift(980e-9, 7500.0) == pytest.approx(2.45169609970641756e-11, rel=1e-14)
    assert optics.doppler_wavelength_shift(980e-9, -7500.0) == -optics.doppler_wavelength_shift(980e-9, 7500.0)
    with pytest.raises(DomainError):
        optics.doppler_wavelength_shift(980e-9, 0.02 * optics.SPEED_OF_LIGHT)
