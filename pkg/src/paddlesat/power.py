"""Solar collection, orbit-average energy, battery sizing and delivered laser power."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .units import DomainError, require_finite


@dataclass(frozen=True)
class SolarPanelSpec:
    area: float = 1.0  # m^2
    efficiency: float = 0.25
    solar_irradiance: float = 1362.0  # W/m^2
    incidence_angle: float = 0.0  # rad

    def __post_init__(self):
        if require_finite("area", self.area) <= 0:
            raise DomainError(f"area must be > 0, got {self.area}")
        if not 0.0 < require_finite("efficiency", self.efficiency) <= 1.0:
            raise DomainError(f"efficiency must be in (0, 1], got {self.efficiency}")
        if require_finite("solar_irradiance", self.solar_irradiance) <= 0:
            raise DomainError(f"solar_irradiance must be > 0, got {self.solar_irradiance}")
        if not 0.0 <= require_finite("incidence_angle", self.incidence_angle) <= math.pi / 2:
            raise DomainError(f"incidence_angle must be in [0, pi/2], got {self.incidence_angle}")


@dataclass(frozen=True)
class BatterySpec:
    energy_density: float = 200.0  # Wh/kg
    potential_voltage: float = 4.0  # V
    spare_fraction: float = 0.20
    round_trip_efficiency: float = 1.0

    def __post_init__(self):
        if require_finite("energy_density", self.energy_density) <= 0:
            raise DomainError(f"energy_density must be > 0, got {self.energy_density}")
        if require_finite("potential_voltage", self.potential_voltage) <= 0:
            raise DomainError(f"potential_voltage must be > 0, got {self.potential_voltage}")
        if not 0.0 <= require_finite("spare_fraction", self.spare_fraction) < 1.0:
            raise DomainError(f"spare_fraction must be in [0, 1), got {self.spare_fraction}")
        if not 0.0 < require_finite("round_trip_efficiency", self.round_trip_efficiency) <= 1.0:
            raise DomainError(f"round_trip_efficiency must be in (0, 1], got {self.round_trip_efficiency}")


@dataclass(frozen=True)
class PteChain:
    emitter: float = 0.30
    transmission: float = 0.999
    receiver: float = 0.35

    def __post_init__(self):
        for name in ("emitter", "transmission", "receiver"):
            if not 0.0 < require_finite(name, getattr(self, name)) <= 1.0:
                raise DomainError(f"{name} efficiency must be in (0, 1], got {getattr(self, name)}")


@dataclass(frozen=True)
class PowerBudgetResult:
    panel_power: float
    orbit_period: float
    eclipse_duration: float
    expendable_power: float
    orbit_energy: float
    derated_power: float
    derated_energy: float
    battery_mass: float
    battery_capacity: float
    telemetry_power: float
    bus_load: float
    optical_input_power: float
    pte_total: float
    delivered_power: float


def panel_power(p: SolarPanelSpec) -> float:
    return p.area * p.solar_irradiance * p.efficiency * math.cos(p.incidence_angle)


def pte_total(chain: PteChain) -> float:
    return chain.emitter * chain.transmission * chain.receiver


def _sunlit_time(period: float, eclipse: float) -> float:
    if period <= 0:
        raise DomainError(f"orbit period must be > 0, got {period}")
    if not 0.0 <= eclipse < period:
        raise DomainError(f"eclipse duration must be in [0, period), got {eclipse} for period {period}")
    return period - eclipse


def expendable_power(p: float, period: float, eclipse: float) -> float:
    """Orbit-average power available when the panel only produces in sunlight."""
    return p * _sunlit_time(period, eclipse) / period


def orbit_energy(p: float, period: float, eclipse: float) -> float:
    """Energy collected per orbit, Wh."""
    return p * _sunlit_time(period, eclipse) / 3600.0


def derate_for_spare(value: float, spare_fraction: float) -> float:
    """Hold back spare battery headroom; works on W or Wh alike."""
    if spare_fraction < 0:
        raise DomainError(f"spare_fraction must be >= 0, got {spare_fraction}")
    return value / (1.0 + spare_fraction)


def battery_mass(derated_energy: float, b: BatterySpec) -> float:
    return derated_energy / b.energy_density


def battery_capacity_ah(derated_energy: float, b: BatterySpec) -> float:
    if b.potential_voltage <= 0:
        raise DomainError(f"potential_voltage must be > 0, got {b.potential_voltage}")
    return derated_energy / b.potential_voltage


def delivered_power(optical_input: float, chain: PteChain | float) -> float:
    """Electrical power at the host; ``chain`` may be a ``PteChain`` or a bare efficiency."""
    if optical_input < 0:
        raise DomainError(f"optical_input must be >= 0, got {optical_input}")
    eta = pte_total(chain) if isinstance(chain, PteChain) else float(chain)
    return optical_input * eta


def power_budget(
    panel: SolarPanelSpec,
    period: float,
    eclipse: float,
    battery: BatterySpec,
    chain: PteChain,
    telemetry_power: float = 1.0,
    bus_load: float = 0.0,
    capture_fraction: float = 1.0,
) -> PowerBudgetResult:
    """Run the panel -> orbit average -> battery -> laser -> host chain.

    ``capture_fraction`` scales the delivered power for beam spillover; the
    default of 1 keeps the unspilled chain.
    """
    if telemetry_power < 0 or bus_load < 0:
        raise DomainError("telemetry_power and bus_load must be >= 0")
    if not 0.0 <= capture_fraction <= 1.0:
        raise DomainError(f"capture_fraction must be in [0, 1], got {capture_fraction}")
    p = panel_power(panel)
    expend = expendable_power(p, period, eclipse)
    energy = orbit_energy(p, period, eclipse)
    derated_p = derate_for_spare(expend, battery.spare_fraction)
    derated_e = derate_for_spare(energy, battery.spare_fraction)
    # only eclipse energy passes through the battery
    if battery.round_trip_efficiency != 1.0:
        eclipse_share = eclipse / period
        derated_p *= 1.0 - eclipse_share * (1.0 - battery.round_trip_efficiency)
    overhead = telemetry_power + bus_load
    if overhead > derated_p:
        raise DomainError(
            f"telemetry + bus load ({overhead} W) exceeds derated power ({derated_p:.3f} W)"
        )
    optical_input = derated_p - overhead
    eta = pte_total(chain)
    return PowerBudgetResult(
        panel_power=p,
        orbit_period=period,
        eclipse_duration=eclipse,
        expendable_power=expend,
        orbit_energy=energy,
        derated_power=derated_p,
        derated_energy=derated_e,
        battery_mass=battery_mass(derated_e, battery),
        battery_capacity=battery_capacity_ah(derated_e, battery),
        telemetry_power=telemetry_power,
        bus_load=bus_load,
        optical_input_power=optical_input,
        pte_total=eta,
        delivered_power=delivered_power(optical_input, eta) * capture_fraction,
    )


def display_precision_delivered(derated_power: float, telemetry_power: float, chain: PteChain) -> tuple[float, float]:
    """Delivered power from display-precision inputs.

    The derated budget is truncated to whole watts (never promising power that
    is not there) and the chain efficiency rounded to 3 decimals. Returns
    ``(optical_input, delivered)``.
    """
    optical_input = math.floor(derated_power) - telemetry_power
    return optical_input, delivered_power(max(optical_input, 0.0), round(pte_total(chain), 3))
