"""Beam geometry, pointing jitter, capture fraction and Doppler shift.

Divergences are full angles and ``divergence * range`` is the spot
*diameter*. Jitter is modeled as two independent zero-mean Gaussian axes,
each with the RSS angular sigma, so the radial miss distance is Rayleigh.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .units import DomainError, require_finite

SPEED_OF_LIGHT = 299_792_458.0
DIFFRACTION_FACTOR = 2.44
RNG_ALGORITHM = "numpy.PCG64/SeedSequence.spawn"
MC_CHUNK = 1 << 15


class BeamProfile(str, enum.Enum):
    FLAT_TOP = "flat_top"
    GAUSSIAN = "gaussian"


class CaptureMethod(str, enum.Enum):
    ANALYTIC = "analytic"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class OpticalTxSpec:
    wavelength: float = 980e-9
    aperture_diameter: float = 0.15
    design_divergence: float = 200e-6
    beam_profile: BeamProfile = BeamProfile.FLAT_TOP

    def __post_init__(self):
        if require_finite("wavelength", self.wavelength) <= 0:
            raise DomainError(f"wavelength must be > 0, got {self.wavelength}")
        if require_finite("aperture_diameter", self.aperture_diameter) <= 0:
            raise DomainError(f"aperture_diameter must be > 0, got {self.aperture_diameter}")
        object.__setattr__(self, "beam_profile", BeamProfile(self.beam_profile))
        limit = diffraction_divergence(self)
        if require_finite("design_divergence", self.design_divergence) < limit:
            raise DomainError(
                f"design_divergence {self.design_divergence:.4g} rad is below the diffraction "
                f"limit {limit:.4g} rad"
            )


@dataclass(frozen=True)
class JitterSpec:
    sigma_tx: float = 0.0
    sigma_rx: float = 0.0

    def __post_init__(self):
        for name in ("sigma_tx", "sigma_rx"):
            if require_finite(name, getattr(self, name)) < 0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class ReceiverSpec:
    radius: float
    separation: float

    def __post_init__(self):
        if require_finite("radius", self.radius) <= 0:
            raise DomainError(f"receiver radius must be > 0, got {self.radius}")
        if require_finite("separation", self.separation) <= 0:
            raise DomainError(f"separation must be > 0, got {self.separation}")


@dataclass(frozen=True)
class CaptureEstimate:
    mean_fraction: float
    stderr: float
    sample_count: int
    method: CaptureMethod
    rng: str = ""


def diffraction_divergence(tx: OpticalTxSpec) -> float:
    if tx.aperture_diameter <= 0:
        raise DomainError(f"aperture_diameter must be > 0, got {tx.aperture_diameter}")
    return DIFFRACTION_FACTOR * tx.wavelength / tx.aperture_diameter


def spot_diameter(divergence: float, separation: float) -> float:
    if divergence < 0 or separation < 0:
        raise DomainError("divergence and separation must be >= 0")
    return divergence * separation


def combined_jitter(j: JitterSpec) -> float:
    return math.hypot(j.sigma_tx, j.sigma_rx)


def lateral_error(sigma_theta: float, separation: float) -> float:
    if sigma_theta < 0 or separation < 0:
        raise DomainError("sigma_theta and separation must be >= 0")
    return sigma_theta * separation


def _capture_kernel(tx: OpticalTxSpec, rx: ReceiverSpec):
    spot = spot_diameter(tx.design_divergence, rx.separation)
    if tx.beam_profile is BeamProfile.FLAT_TOP:
        beam_r = spot / 2.0
        return lambda d: _kernels.flat_top_capture(beam_r, rx.radius, d)
    # 1/e^2 intensity radius w = spot/2, per-axis std = w/2
    sigma = spot / 4.0
    return lambda d: _kernels.gaussian_capture(sigma, rx.radius, d)


def capture_fraction_static(tx: OpticalTxSpec, rx: ReceiverSpec, offset: float) -> float:
    """Fraction of beam power landing on the receiver disk for a fixed centre offset."""
    offset = require_finite("offset", offset)
    if offset < 0:
        raise DomainError(f"offset must be >= 0, got {offset}")
    return float(_capture_kernel(tx, rx)(np.array([offset]))[0])


def capture_fraction_jittered(
    tx: OpticalTxSpec,
    rx: ReceiverSpec,
    j: JitterSpec,
    samples: int,
    seed: int,
    workers: int = 1,
) -> CaptureEstimate:
    """Monte Carlo mean capture fraction under Rayleigh-distributed beam wander.

    Samples are split into fixed-size chunks, each with its own child stream
    of ``SeedSequence(seed)``, so the result is bit-identical for any
    ``workers`` count.
    """
    if int(samples) != samples or samples <= 0:
        raise DomainError(f"samples must be a positive integer, got {samples}")
    samples = int(samples)
    sigma_r = lateral_error(combined_jitter(j), rx.separation)
    kernel = _capture_kernel(tx, rx)

    if sigma_r == 0.0:
        value = float(kernel(np.zeros(1))[0])
        return CaptureEstimate(value, 0.0, samples, CaptureMethod.MONTE_CARLO, RNG_ALGORITHM)

    sizes = [MC_CHUNK] * (samples // MC_CHUNK)
    if samples % MC_CHUNK:
        sizes.append(samples % MC_CHUNK)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def run_chunk(k: int) -> np.ndarray:
        rng = np.random.Generator(np.random.PCG64(children[k]))
        xy = rng.standard_normal((sizes[k], 2)) * sigma_r
        return kernel(np.hypot(xy[:, 0], xy[:, 1]))

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_chunk, range(len(sizes))))
    else:
        parts = [run_chunk(k) for k in range(len(sizes))]
    fractions = np.concatenate(parts)
    mean = float(fractions.mean())
    stderr = float(fractions.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return CaptureEstimate(mean, stderr, samples, CaptureMethod.MONTE_CARLO, RNG_ALGORITHM)


def doppler_wavelength_shift(wavelength: float, v_rel: float) -> float:
    """First-order shift; positive ``v_rel`` (receding) lengthens the wavelength."""
    if abs(v_rel) >= 0.01 * SPEED_OF_LIGHT:
        raise DomainError(f"|v_rel| must be < 0.01 c, got {v_rel}")
    return wavelength * v_rel / SPEED_OF_LIGHT
