"""Circular two-body orbit geometry, HCW relative motion and propellant budgets."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .units import DomainError, require_finite

MU_EARTH = 3.986004418e14  # m^3/s^2
R_EARTH = 6378137.0  # m, equatorial
G0 = 9.80665  # m/s^2
SECONDS_PER_DAY = 86400.0
DAYS_PER_YEAR = 365.0


@dataclass(frozen=True)
class CentralBody:
    mu: float = MU_EARTH
    equatorial_radius: float = R_EARTH

    def __post_init__(self):
        if not require_finite("mu", self.mu) > 0:
            raise DomainError(f"mu must be > 0, got {self.mu}")
        if not require_finite("equatorial_radius", self.equatorial_radius) > 0:
            raise DomainError(f"equatorial_radius must be > 0, got {self.equatorial_radius}")


@dataclass(frozen=True)
class OrbitSpec:
    semimajor_axis: float
    eccentricity: float = 0.0

    def __post_init__(self):
        a = require_finite("semimajor_axis", self.semimajor_axis)
        if a <= 0:
            raise DomainError(f"semimajor_axis must be > 0, got {a}")
        e = require_finite("eccentricity", self.eccentricity)
        if not 0.0 <= e < 1.0:
            raise DomainError(f"eccentricity must be in [0, 1), got {e}")
        if e != 0.0:
            raise DomainError(f"only circular orbits are modeled (eccentricity = 0), got {e}")

    @classmethod
    def from_altitude(cls, altitude: float, body: CentralBody = CentralBody()) -> OrbitSpec:
        return cls(body.equatorial_radius + altitude)

    def check_above(self, body: CentralBody):
        if self.semimajor_axis <= body.equatorial_radius:
            raise DomainError(
                f"semimajor_axis {self.semimajor_axis} m is not above the body radius "
                f"{body.equatorial_radius} m"
            )


@dataclass(frozen=True)
class FormationSpec:
    separation: float
    sma_bias: float = 0.0
    correction_cadence: float = SECONDS_PER_DAY

    def __post_init__(self):
        if require_finite("separation", self.separation) <= 0:
            raise DomainError(f"separation must be > 0, got {self.separation}")
        if require_finite("sma_bias", self.sma_bias) < 0:
            raise DomainError(f"sma_bias must be >= 0, got {self.sma_bias}")
        if require_finite("correction_cadence", self.correction_cadence) <= 0:
            raise DomainError(f"correction_cadence must be > 0, got {self.correction_cadence}")

    @property
    def in_nominal_envelope(self) -> bool:
        return 100.0 <= self.separation <= 500.0


@dataclass(frozen=True)
class PropulsionSpec:
    wet_mass: float
    isp: float
    g0: float = G0
    annual_dv_budget: float = 5.0

    def __post_init__(self):
        for name in ("wet_mass", "isp", "g0"):
            if require_finite(name, getattr(self, name)) <= 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")
        if require_finite("annual_dv_budget", self.annual_dv_budget) < 0:
            raise DomainError(f"annual_dv_budget must be >= 0, got {self.annual_dv_budget}")

    @property
    def exhaust_velocity(self) -> float:
        return self.g0 * self.isp


@dataclass(frozen=True)
class HcwState:
    """Relative state in the Hill frame: x radial, y along-track, z cross-track."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    vx: float = 0.0
    vy: float = 0.0
    vz: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        for name in ("x", "y", "z", "vx", "vy", "vz", "t"):
            require_finite(name, getattr(self, name))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.vx, self.vy, self.vz])

    @classmethod
    def from_array(cls, v, t: float = 0.0) -> HcwState:
        return cls(*(float(c) for c in v), t=t)


def _positive_sma(a: float) -> float:
    a = require_finite("semimajor_axis", a)
    if a <= 0:
        raise DomainError(f"semimajor_axis must be > 0, got {a}")
    return a


def mean_motion(body: CentralBody, orbit: OrbitSpec) -> float:
    a = _positive_sma(orbit.semimajor_axis)
    return math.sqrt(body.mu / a**3)


def orbital_period(body: CentralBody, orbit: OrbitSpec) -> float:
    a = _positive_sma(orbit.semimajor_axis)
    return math.sqrt(4.0 * math.pi**2 * a**3 / body.mu)


def eclipse_duration(body: CentralBody, orbit: OrbitSpec) -> float:
    """Worst-case shadow time per orbit: cylindrical shadow, sun in the orbit plane."""
    a = _positive_sma(orbit.semimajor_axis)
    if a <= body.equatorial_radius:
        raise DomainError(f"orbit radius {a} m does not clear body radius {body.equatorial_radius} m")
    period = orbital_period(body, orbit)
    return period / 2.0 - period * math.acos(body.equatorial_radius / a) / math.pi


def drift_rate(n: float, sma_bias: float) -> float:
    """Along-track drift speed (m/s) caused by a semimajor-axis bias."""
    if sma_bias < 0:
        raise DomainError(f"sma_bias must be >= 0, got {sma_bias}")
    return 1.5 * n * sma_bias


def drift_per_day(n: float, sma_bias: float) -> float:
    return drift_rate(n, sma_bias) * SECONDS_PER_DAY


def mean_motion_offset(n: float, sma_bias: float, a: float) -> float:
    a = _positive_sma(a)
    return -1.5 * n * (sma_bias / a)


def stationkeeping_dv_per_correction(n: float, sma_bias: float, cadence: float = SECONDS_PER_DAY) -> float:
    """Delta-v of one correction, cancelling one day's drift speed per day of cadence."""
    if cadence <= 0:
        raise DomainError(f"cadence must be > 0, got {cadence}")
    return drift_rate(n, sma_bias) * cadence / SECONDS_PER_DAY


def annual_stationkeeping_dv(n: float, sma_bias: float, cadence: float = SECONDS_PER_DAY) -> float:
    per_correction = stationkeeping_dv_per_correction(n, sma_bias, cadence)
    corrections_per_year = DAYS_PER_YEAR * SECONDS_PER_DAY / cadence
    return per_correction * corrections_per_year


def propellant_mass(prop: PropulsionSpec, dv: float) -> float:
    """Tsiolkovsky: m_p = m0 (1 - exp(-dv / (g0 Isp)))."""
    dv = require_finite("dv", dv)
    if dv < 0:
        raise DomainError(f"dv must be >= 0, got {dv}")
    return prop.wet_mass * -math.expm1(-dv / prop.exhaust_velocity)


def pointing_displacement(angle: float, separation: float) -> float:
    if angle < 0 or separation < 0:
        raise DomainError("angle and separation must be >= 0")
    return angle * separation


RETREAT_DV_RANGE = (0.5, 1.0)


def retreat_propellant(
    prop: PropulsionSpec, retreat_dv: float, nominal_range: tuple[float, float] = RETREAT_DV_RANGE
) -> tuple[float, bool]:
    """Propellant for an emergency retreat burn.

    Returns ``(mass_kg, in_range)`` where ``in_range`` flags whether the burn
    lies inside the nominal retreat envelope.
    """
    lo, hi = nominal_range
    return propellant_mass(prop, retreat_dv), lo <= retreat_dv <= hi


def hcw_stm(n: float, t: float) -> np.ndarray:
    """6x6 closed-form HCW state transition matrix for state [x y z vx vy vz]."""
    if n <= 0:
        raise DomainError(f"mean motion must be > 0, got {n}")
    nt = n * t
    s, c = math.sin(nt), math.cos(nt)
    return np.array(
        [
            [4 - 3 * c, 0, 0, s / n, 2 * (1 - c) / n, 0],
            [6 * (s - nt), 1, 0, -2 * (1 - c) / n, (4 * s - 3 * nt) / n, 0],
            [0, 0, c, 0, 0, s / n],
            [3 * n * s, 0, 0, c, 2 * s, 0],
            [-6 * n * (1 - c), 0, 0, -2 * s, 4 * c - 3, 0],
            [0, 0, -n * s, 0, 0, c],
        ]
    )


def hcw_propagate(state0: HcwState, n: float, t: float) -> HcwState:
    return HcwState.from_array(hcw_stm(n, t) @ state0.as_array(), t=state0.t + t)


def hcw_secular_drift(state: HcwState, n: float) -> float:
    """Along-track drift per unit time; zero iff vy = -2 n x."""
    return -3.0 * (state.vy + 2.0 * n * state.x)
