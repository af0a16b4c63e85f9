"""S-band crosslink budget in dB.

Powers are dBm throughout. No atmospheric, scintillation or rain terms: at
formation ranges the channel is free space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .units import DomainError, require_finite, watts_from_dbm

THERMAL_NOISE_DBM_HZ = -174.0
FSPL_CONSTANT_DB = 92.45  # f in GHz, R in km


@dataclass(frozen=True)
class RfLinkSpec:
    separation_km: float = 0.5
    frequency_ghz: float = 2.3
    data_rate_bps: float = 19_200.0
    noise_figure_db: float = 3.0
    required_ebn0_db: float = 9.6
    link_margin_db: float = 10.0
    system_losses_db: float = 3.0
    tx_power_dbm: float = 0.0
    tx_gain_dbi: float = 3.0
    rx_gain_dbi: float = 0.0
    bandwidth_hz: float = 1e5

    def __post_init__(self):
        for f in fields(self):
            require_finite(f.name, getattr(self, f.name))
        for name in ("separation_km", "frequency_ghz", "data_rate_bps", "bandwidth_hz"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("noise_figure_db", "link_margin_db", "system_losses_db"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def bandwidth_below_rate(self) -> bool:
        return self.bandwidth_hz < self.data_rate_bps


@dataclass(frozen=True)
class RfBudgetResult:
    fspl: float
    n0: float
    c_req: float
    eirp_req_dbm: float
    eirp_req_w: float
    p_r: float
    noise_power: float
    cn: float
    ebn0: float
    raw_excess: float
    excess_margin: float
    closes: bool


def fspl_db(frequency_ghz: float, separation_km: float) -> float:
    if frequency_ghz <= 0 or separation_km <= 0:
        raise DomainError("frequency and separation must be > 0")
    return FSPL_CONSTANT_DB + 20.0 * math.log10(frequency_ghz) + 20.0 * math.log10(separation_km)


def noise_density(noise_figure_db: float) -> float:
    return THERMAL_NOISE_DBM_HZ + noise_figure_db


def required_carrier(spec: RfLinkSpec) -> float:
    return (
        spec.required_ebn0_db
        + spec.link_margin_db
        + 10.0 * math.log10(spec.data_rate_bps)
        + noise_density(spec.noise_figure_db)
    )


def required_eirp(spec: RfLinkSpec) -> tuple[float, float]:
    """EIRP (dBm, W) that puts exactly the required carrier on the receiver."""
    eirp = (
        required_carrier(spec)
        + fspl_db(spec.frequency_ghz, spec.separation_km)
        + spec.system_losses_db
        - spec.rx_gain_dbi
    )
    return eirp, watts_from_dbm(eirp)


def received_power(spec: RfLinkSpec) -> float:
    return (
        spec.tx_power_dbm
        + spec.tx_gain_dbi
        + spec.rx_gain_dbi
        - fspl_db(spec.frequency_ghz, spec.separation_km)
        - spec.system_losses_db
    )


def noise_power(spec: RfLinkSpec) -> float:
    if spec.bandwidth_hz <= 0:
        raise DomainError(f"bandwidth must be > 0, got {spec.bandwidth_hz}")
    return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(spec.bandwidth_hz) + spec.noise_figure_db


def carrier_to_noise(spec: RfLinkSpec) -> float:
    return received_power(spec) - noise_power(spec)


def ebn0_achieved(spec: RfLinkSpec) -> float:
    return carrier_to_noise(spec) + 10.0 * math.log10(spec.bandwidth_hz / spec.data_rate_bps)


def evaluate_rf_link(spec: RfLinkSpec) -> RfBudgetResult:
    eirp_dbm, eirp_w = required_eirp(spec)
    ebn0 = ebn0_achieved(spec)
    raw = ebn0 - spec.required_ebn0_db
    excess = raw - spec.link_margin_db
    return RfBudgetResult(
        fspl=fspl_db(spec.frequency_ghz, spec.separation_km),
        n0=noise_density(spec.noise_figure_db),
        c_req=required_carrier(spec),
        eirp_req_dbm=eirp_dbm,
        eirp_req_w=eirp_w,
        p_r=received_power(spec),
        noise_power=noise_power(spec),
        cn=carrier_to_noise(spec),
        ebn0=ebn0,
        raw_excess=raw,
        excess_margin=excess,
        closes=excess >= 0.0,
    )
