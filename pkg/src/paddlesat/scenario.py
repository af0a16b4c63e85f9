"""Scenario files, end-to-end evaluation against requirements, and sweeps.

Scenario files are TOML. Every field has a default, so an empty document is
the baseline mission. Field names carry their units (``_km``, ``_urad``...);
conversion to SI happens here and nowhere else.
"""

from __future__ import annotations

import copy
import dataclasses
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import __version__, optics, orbit, power, rflink
from .report import BudgetLine, MissionReport, Verdict, canonical
from .units import DomainError

SCHEMA_VERSION = 1
DEFAULT_SEMIMAJOR_AXIS_KM = 6878.0
BASELINE_DESCRIPTION = "6U laser charging companion, 500 km circular orbit, 100-500 m separation"


class ScenarioError(ValueError):
    """Base class for problems with a scenario document."""


class ScenarioParseError(ScenarioError):
    pass


class ScenarioValidationError(ScenarioError):
    def __init__(self, path: str, constraint: str, value: Any = None):
        self.path = path
        self.constraint = constraint
        self.value = value
        msg = f"{path}: {constraint}"
        if value is not None:
            msg += f" (got {value!r})"
        super().__init__(msg)


class SchemaVersionError(ScenarioError):
    pass


class EvaluationError(RuntimeError):
    def __init__(self, domain: str, message: str):
        self.domain = domain
        super().__init__(f"[{domain}] {message}")


def _field(default, unit: str, doc: str, **checks):
    if isinstance(default, list):
        return field(default_factory=lambda: list(default), metadata={"unit": unit, "doc": doc, "checks": checks})
    return field(default=default, metadata={"unit": unit, "doc": doc, "checks": checks})


@dataclass
class BodySection:
    mu_m3_s2: float = _field(orbit.MU_EARTH, "m^3/s^2", "Gravitational parameter", gt=0)
    equatorial_radius_km: float = _field(orbit.R_EARTH / 1e3, "km", "Equatorial radius", gt=0)


@dataclass
class OrbitSection:
    semimajor_axis_km: float = _field(DEFAULT_SEMIMAJOR_AXIS_KM, "km", "Circular orbit radius", gt=0)
    altitude_km: Optional[float] = _field(
        None, "km", "Altitude above the equatorial radius; replaces semimajor_axis_km at load", gt=0
    )
    eccentricity: float = _field(0.0, "1", "Only 0 (circular) is supported", ge=0, lt=1)


@dataclass
class FormationSection:
    separation_min_m: float = _field(100.0, "m", "Closest operating separation", gt=0)
    separation_max_m: float = _field(500.0, "m", "Worst-case (largest) operating separation", gt=0)
    sma_bias_m: float = _field(10.0, "m", "Semimajor-axis bias driving along-track drift", ge=0)
    correction_cadence_s: float = _field(86400.0, "s", "Interval between station-keeping burns", gt=0)


@dataclass
class PropulsionSection:
    wet_mass_kg: float = _field(11.0, "kg", "Spacecraft wet mass", gt=0)
    cold_gas_isp_s: float = _field(60.0, "s", "Cold-gas thruster specific impulse", gt=0)
    electric_isp_s: float = _field(1000.0, "s", "Electric micropropulsion specific impulse", gt=0)
    g0_m_s2: float = _field(orbit.G0, "m/s^2", "Standard gravity", gt=0)
    annual_dv_budget_m_s: float = _field(5.0, "m/s", "Yearly delta-v used for propellant sizing", ge=0)
    retreat_dv_m_s: float = _field(1.0, "m/s", "Emergency retreat burn", ge=0)
    retreat_dv_range_m_s: list = _field([0.5, 1.0], "m/s", "Nominal retreat burn envelope [min, max]")


@dataclass
class OpticalSection:
    wavelength_nm: float = _field(980.0, "nm", "Laser wavelength", gt=0)
    aperture_diameter_m: float = _field(0.15, "m", "Transmit aperture diameter", gt=0)
    design_divergence_urad: float = _field(200.0, "µrad", "Full-angle system divergence", gt=0)
    beam_profile: str = _field("flat_top", "", "Irradiance profile", choices=("flat_top", "gaussian"))
    sigma_tx_urad: float = _field(20.0, "µrad", "One-sigma transmitter pointing residual", ge=0)
    sigma_rx_urad: float = _field(0.0, "µrad", "One-sigma receiver pointing residual", ge=0)
    illustrative_sigma_tx_urad: float = _field(250.0, "µrad", "Conservative open-loop tx jitter case", ge=0)
    illustrative_sigma_rx_urad: float = _field(1000.0, "µrad", "Conservative open-loop rx jitter case", ge=0)
    receiver_radius_m: float = _field(0.1, "m", "Radius of the host receiver disk", gt=0)
    mc_samples: int = _field(100_000, "samples", "Monte Carlo samples for jittered capture", ge=1)
    relative_velocity_m_s: Optional[float] = _field(
        None, "m/s", "Line-of-sight velocity for Doppler (default: circular orbital speed, an upper bound)"
    )


@dataclass
class RfSection:
    separation_km: Optional[float] = _field(
        None, "km", "Evaluation range (default: formation.separation_max_m)", gt=0
    )
    frequency_ghz: float = _field(2.3, "GHz", "Carrier frequency", gt=0)
    data_rate_bps: float = _field(19200.0, "bps", "Telemetry bit rate", gt=0)
    noise_figure_db: float = _field(3.0, "dB", "Receiver noise figure", ge=0)
    required_ebn0_db: float = _field(9.6, "dB", "Eb/N0 needed for the target bit error rate")
    link_margin_db: float = _field(10.0, "dB", "Explicit link margin", ge=0)
    system_losses_db: float = _field(3.0, "dB", "Cable, mismatch, pointing and polarization losses", ge=0)
    tx_power_dbm: float = _field(0.0, "dBm", "Transmitter output power")
    tx_gain_dbi: float = _field(3.0, "dBi", "Transmit antenna gain")
    rx_gain_dbi: float = _field(0.0, "dBi", "Receive antenna gain")
    bandwidth_hz: float = _field(1e5, "Hz", "Receiver noise bandwidth", gt=0)


@dataclass
class PanelSection:
    area_m2: float = _field(1.0, "m^2", "Solar array area", gt=0)
    efficiency: float = _field(0.25, "1", "Cell conversion efficiency", gt=0, le=1)
    solar_irradiance_w_m2: float = _field(1362.0, "W/m^2", "Solar constant", gt=0)
    incidence_angle_deg: float = _field(0.0, "deg", "Sun incidence angle", ge=0, le=90)


@dataclass
class BatterySection:
    energy_density_wh_kg: float = _field(200.0, "Wh/kg", "Specific energy", gt=0)
    potential_voltage_v: float = _field(4.0, "V", "Cell voltage", gt=0)
    spare_fraction: float = _field(0.20, "1", "Spare capacity held in reserve", ge=0, lt=1)
    round_trip_efficiency: float = _field(1.0, "1", "Charge/discharge efficiency on eclipse energy", gt=0, le=1)


@dataclass
class PteSection:
    emitter: float = _field(0.30, "1", "Laser wall-plug efficiency", gt=0, le=1)
    transmission: float = _field(0.999, "1", "Optical path transmission", gt=0, le=1)
    receiver: float = _field(0.35, "1", "Photovoltaic conversion at the laser line", gt=0, le=1)


@dataclass
class LoadsSection:
    telemetry_power_w: float = _field(1.0, "W", "RF telemetry draw", ge=0)
    bus_load_w: float = _field(0.0, "W", "Other bus loads taken from the laser budget", ge=0)


@dataclass
class RequirementsSection:
    max_pointing_residual_urad: float = _field(20.0, "µrad", "Largest allowed RSS pointing residual", ge=0)
    separation_envelope_m: list = _field([100.0, 500.0], "m", "Allowed separation [min, max]")
    min_delivered_power_w: float = _field(0.0, "W", "Smallest acceptable power at the host", ge=0)
    annual_dv_budget_m_s: list = _field([1.0, 10.0], "m/s", "Expected annual station-keeping band [min, max]")
    rf_must_close: bool = _field(True, "", "Fail the report when the crosslink does not close")


SECTIONS = {
    "body": BodySection,
    "orbit": OrbitSection,
    "formation": FormationSection,
    "propulsion": PropulsionSection,
    "optical": OpticalSection,
    "rf": RfSection,
    "panel": PanelSection,
    "battery": BatterySection,
    "pte": PteSection,
    "loads": LoadsSection,
    "requirements": RequirementsSection,
}

TOP_LEVEL = {
    "schema_version": (int, SCHEMA_VERSION, "Scenario schema version"),
    "name": (str, "baseline", "Scenario name"),
    "description": (str, BASELINE_DESCRIPTION, "Free text"),
    "seed": (int, 20251016, "Seed for every Monte Carlo line"),
    "apply_capture_fraction": (bool, False, "Multiply delivered power by the jittered capture fraction"),
}


@dataclass
class MissionScenario:
    name: str = "baseline"
    description: str = BASELINE_DESCRIPTION
    seed: int = 20251016
    apply_capture_fraction: bool = False
    body: BodySection = field(default_factory=BodySection)
    orbit: OrbitSection = field(default_factory=OrbitSection)
    formation: FormationSection = field(default_factory=FormationSection)
    propulsion: PropulsionSection = field(default_factory=PropulsionSection)
    optical: OpticalSection = field(default_factory=OpticalSection)
    rf: RfSection = field(default_factory=RfSection)
    panel: PanelSection = field(default_factory=PanelSection)
    battery: BatterySection = field(default_factory=BatterySection)
    pte: PteSection = field(default_factory=PteSection)
    loads: LoadsSection = field(default_factory=LoadsSection)
    requirements: RequirementsSection = field(default_factory=RequirementsSection)
    schema_version: int = SCHEMA_VERSION

    # -- conversion to module specs (SI) --

    def central_body(self) -> orbit.CentralBody:
        return orbit.CentralBody(self.body.mu_m3_s2, self.body.equatorial_radius_km * 1e3)

    def orbit_spec(self) -> orbit.OrbitSpec:
        o = self.orbit
        if o.altitude_km is not None:
            a = (self.body.equatorial_radius_km + o.altitude_km) * 1e3
        else:
            a = o.semimajor_axis_km * 1e3
        return orbit.OrbitSpec(a, o.eccentricity)

    def formation_spec(self, separation: Optional[float] = None) -> orbit.FormationSpec:
        f = self.formation
        return orbit.FormationSpec(
            separation if separation is not None else f.separation_max_m, f.sma_bias_m, f.correction_cadence_s
        )

    def propulsion_spec(self, isp: float) -> orbit.PropulsionSpec:
        p = self.propulsion
        return orbit.PropulsionSpec(p.wet_mass_kg, isp, p.g0_m_s2, p.annual_dv_budget_m_s)

    def tx_spec(self) -> optics.OpticalTxSpec:
        o = self.optical
        return optics.OpticalTxSpec(
            o.wavelength_nm * 1e-9, o.aperture_diameter_m, o.design_divergence_urad * 1e-6, o.beam_profile
        )

    def jitter_spec(self) -> optics.JitterSpec:
        return optics.JitterSpec(self.optical.sigma_tx_urad * 1e-6, self.optical.sigma_rx_urad * 1e-6)

    def illustrative_jitter_spec(self) -> optics.JitterSpec:
        o = self.optical
        return optics.JitterSpec(o.illustrative_sigma_tx_urad * 1e-6, o.illustrative_sigma_rx_urad * 1e-6)

    def receiver_spec(self, separation: Optional[float] = None) -> optics.ReceiverSpec:
        sep = separation if separation is not None else self.formation.separation_max_m
        return optics.ReceiverSpec(self.optical.receiver_radius_m, sep)

    def rf_spec(self) -> rflink.RfLinkSpec:
        r = self.rf
        sep_km = r.separation_km if r.separation_km is not None else self.formation.separation_max_m / 1e3
        return rflink.RfLinkSpec(
            separation_km=sep_km,
            frequency_ghz=r.frequency_ghz,
            data_rate_bps=r.data_rate_bps,
            noise_figure_db=r.noise_figure_db,
            required_ebn0_db=r.required_ebn0_db,
            link_margin_db=r.link_margin_db,
            system_losses_db=r.system_losses_db,
            tx_power_dbm=r.tx_power_dbm,
            tx_gain_dbi=r.tx_gain_dbi,
            rx_gain_dbi=r.rx_gain_dbi,
            bandwidth_hz=r.bandwidth_hz,
        )

    def panel_spec(self) -> power.SolarPanelSpec:
        p = self.panel
        return power.SolarPanelSpec(
            p.area_m2, p.efficiency, p.solar_irradiance_w_m2, math.radians(p.incidence_angle_deg)
        )

    def battery_spec(self) -> power.BatterySpec:
        b = self.battery
        return power.BatterySpec(b.energy_density_wh_kg, b.potential_voltage_v, b.spare_fraction, b.round_trip_efficiency)

    def pte_chain(self) -> power.PteChain:
        return power.PteChain(self.pte.emitter, self.pte.transmission, self.pte.receiver)

    def to_dict(self) -> dict:
        """Loadable document of every resolved field (unset optionals omitted)."""
        doc: dict = {k: getattr(self, k) for k in TOP_LEVEL}
        for name in SECTIONS:
            section = {k: v for k, v in dataclasses.asdict(getattr(self, name)).items() if v is not None}
            doc[name] = section
        return doc

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()


# -- loading and validation --------------------------------------------------


def _type_name(tp) -> str:
    return {float: "number", int: "integer", bool: "boolean", str: "string", list: "array"}.get(tp, str(tp))


def _field_type(f: dataclasses.Field):
    tp = f.type
    if isinstance(tp, str):
        tp = tp.replace("Optional[", "").rstrip("]")
        return {"float": float, "int": int, "bool": bool, "str": str, "list": list}[tp]
    return tp


def _coerce(path: str, tp, value):
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioValidationError(path, "expected a number", value)
        value = float(value)
        if not math.isfinite(value):
            raise ScenarioValidationError(path, "must be finite", value)
        return value
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, float) and value.is_integer():
                return int(value)
            raise ScenarioValidationError(path, "expected an integer", value)
        return value
    if tp is bool:
        if not isinstance(value, bool):
            raise ScenarioValidationError(path, "expected true or false", value)
        return value
    if tp is str:
        if not isinstance(value, str):
            raise ScenarioValidationError(path, "expected a string", value)
        return value
    if tp is list:
        if not isinstance(value, list) or len(value) != 2:
            raise ScenarioValidationError(path, "expected a two-element array [min, max]", value)
        return [_coerce(f"{path}[{i}]", float, v) for i, v in enumerate(value)]
    raise AssertionError(tp)


def _check(path: str, value, checks: dict):
    if value is None:
        return
    if "choices" in checks and value not in checks["choices"]:
        raise ScenarioValidationError(path, f"must be one of {', '.join(checks['choices'])}", value)
    if "gt" in checks and not value > checks["gt"]:
        raise ScenarioValidationError(path, f"must be > {checks['gt']}", value)
    if "ge" in checks and not value >= checks["ge"]:
        raise ScenarioValidationError(path, f"must be >= {checks['ge']}", value)
    if "lt" in checks and not value < checks["lt"]:
        raise ScenarioValidationError(path, f"must be < {checks['lt']}", value)
    if "le" in checks and not value <= checks["le"]:
        raise ScenarioValidationError(path, f"must be <= {checks['le']}", value)


def _build_section(name: str, cls, raw) -> Any:
    if not isinstance(raw, dict):
        raise ScenarioValidationError(name, "expected a table", raw)
    known = {f.name: f for f in dataclasses.fields(cls)}
    for key in raw:
        if key not in known:
            raise ScenarioValidationError(
                f"{name}.{key}", f"unknown field (allowed: {', '.join(known)})"
            )
    kwargs = {}
    for key, value in raw.items():
        f = known[key]
        path = f"{name}.{key}"
        value = _coerce(path, _field_type(f), value)
        _check(path, value, f.metadata.get("checks", {}))
        kwargs[key] = value
    return cls(**kwargs)


def _cross_validate(s: MissionScenario):
    if s.orbit.eccentricity != 0.0:
        raise ScenarioValidationError("orbit.eccentricity", "only circular orbits (0) are modeled", s.orbit.eccentricity)
    if s.orbit_spec().semimajor_axis <= s.central_body().equatorial_radius:
        raise ScenarioValidationError("orbit.semimajor_axis_km", "must exceed body.equatorial_radius_km")
    if s.formation.separation_min_m > s.formation.separation_max_m:
        raise ScenarioValidationError(
            "formation.separation_min_m", "must not exceed formation.separation_max_m", s.formation.separation_min_m
        )
    for path, pair in (
        ("requirements.separation_envelope_m", s.requirements.separation_envelope_m),
        ("requirements.annual_dv_budget_m_s", s.requirements.annual_dv_budget_m_s),
        ("propulsion.retreat_dv_range_m_s", s.propulsion.retreat_dv_range_m_s),
    ):
        if not 0 <= pair[0] < pair[1]:
            raise ScenarioValidationError(path, "needs 0 <= min < max", pair)
    v = s.optical.relative_velocity_m_s
    if v is not None and abs(v) >= 0.01 * optics.SPEED_OF_LIGHT:
        raise ScenarioValidationError("optical.relative_velocity_m_s", "must be below 1% of c", v)
    try:
        s.tx_spec()
    except DomainError as exc:
        raise ScenarioValidationError("optical.design_divergence_urad", str(exc), s.optical.design_divergence_urad)
    if s.loads.telemetry_power_w + s.loads.bus_load_w < 0:
        raise ScenarioValidationError("loads", "loads must be >= 0")


def scenario_from_dict(raw: dict) -> MissionScenario:
    if not isinstance(raw, dict):
        raise ScenarioValidationError("<root>", "expected a table", raw)
    raw = copy.deepcopy(raw)
    version = raw.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(f"unsupported schema_version {version!r} (this tool reads {SCHEMA_VERSION})")
    kwargs: dict = {}
    for key, value in raw.items():
        if key in TOP_LEVEL:
            tp, _, _ = TOP_LEVEL[key]
            kwargs[key] = _coerce(key, tp, value)
        elif key in SECTIONS:
            kwargs[key] = _build_section(key, SECTIONS[key], value)
        else:
            allowed = ", ".join([*TOP_LEVEL, *SECTIONS])
            raise ScenarioValidationError(key, f"unknown field (allowed: {allowed})")
    orbit_raw = raw.get("orbit", {})
    if "altitude_km" in orbit_raw and "semimajor_axis_km" in orbit_raw:
        raise ScenarioValidationError("orbit.altitude_km", "cannot be combined with orbit.semimajor_axis_km")
    scenario = MissionScenario(**kwargs)
    o = scenario.orbit
    if o.altitude_km is not None:
        scenario.orbit = OrbitSection(scenario.body.equatorial_radius_km + o.altitude_km, None, o.eccentricity)
    _cross_validate(scenario)
    return scenario


def parse_document(source: bytes | str) -> dict:
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScenarioParseError(f"scenario is not UTF-8: {exc}") from None
    try:
        return tomllib.loads(source)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioParseError(f"scenario parse error: {exc}") from None


def load_scenario(source: bytes | str, overrides: list[str] | None = None) -> MissionScenario:
    """Parse, apply ``path=value`` overrides, then validate."""
    raw = parse_document(source)
    for item in overrides or ():
        apply_override(raw, item)
    return scenario_from_dict(raw)


def baseline_source() -> str:
    return resources.files("paddlesat").joinpath("data/baseline.toml").read_text(encoding="utf-8")


def baseline_scenario() -> MissionScenario:
    return load_scenario(baseline_source())


def _parse_value(text: str):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def _field_exists(parts: list[str]) -> bool:
    if len(parts) == 1:
        return parts[0] in TOP_LEVEL
    if len(parts) == 2 and parts[0] in SECTIONS:
        return parts[1] in {f.name for f in dataclasses.fields(SECTIONS[parts[0]])}
    return False


def set_path(raw: dict, path: str, value) -> None:
    parts = path.split(".")
    if not _field_exists(parts):
        raise ScenarioValidationError(path, "unknown parameter path")
    if len(parts) == 1:
        raw[parts[0]] = value
        return
    section = raw.setdefault(parts[0], {})
    if not isinstance(section, dict):
        raise ScenarioValidationError(parts[0], "expected a table", section)
    section[parts[1]] = value
    # altitude and semimajor axis are two spellings of one quantity
    twins = {"altitude_km": "semimajor_axis_km", "semimajor_axis_km": "altitude_km"}
    if parts[0] == "orbit" and parts[1] in twins:
        section.pop(twins[parts[1]], None)


def apply_override(raw: dict, item: str) -> None:
    if "=" not in item:
        raise ScenarioValidationError(item, "override must look like path=value")
    path, text = item.split("=", 1)
    set_path(raw, path.strip(), _parse_value(text.strip()))


# -- evaluation ---------------------------------------------------------------


def _within(value: float, lo: float, hi: float) -> bool:
    return lo <= value <= hi


def _orbit_lines(s: MissionScenario, add):
    body, orb = s.central_body(), s.orbit_spec()
    orb.check_above(body)
    n = orbit.mean_motion(body, orb)
    period = orbit.orbital_period(body, orb)
    eclipse = orbit.eclipse_duration(body, orb)
    f = s.formation
    req = s.requirements

    add("orbit", "semimajor_axis", "semimajor axis", orb.semimajor_axis / 1e3, "km")
    add("orbit", "mean_motion", "mean motion", n, "rad/s")
    add("orbit", "period", "orbital period", period, "s")
    add("orbit", "eclipse_duration", "eclipse duration", eclipse, "s", note="cylindrical shadow, sun in plane")
    add("orbit", "eclipse_fraction", "eclipse fraction", eclipse / period, "1")

    lo, hi = req.separation_envelope_m
    for which, sep in (("min", f.separation_min_m), ("max", f.separation_max_m)):
        ok = _within(sep, lo, hi)
        add("orbit", f"separation_{which}", f"separation ({which})", sep, "m",
            requirement=f"within [{lo:g}, {hi:g}] m", verdict=Verdict.PASS if ok else Verdict.WARN)

    add("orbit", "drift_sensitivity", "drift per metre of bias", orbit.drift_per_day(n, 1.0), "m/day/m")
    add("orbit", "mean_motion_offset", "mean-motion offset", orbit.mean_motion_offset(n, f.sma_bias_m, orb.semimajor_axis), "rad/s")
    add("orbit", "drift_rate", "along-track drift speed", orbit.drift_rate(n, f.sma_bias_m), "m/s")
    add("orbit", "drift_per_day", "along-track drift", orbit.drift_per_day(n, f.sma_bias_m), "m/day")
    add("orbit", "sk_dv_per_correction", "station-keeping dv per correction",
        orbit.stationkeeping_dv_per_correction(n, f.sma_bias_m, f.correction_cadence_s), "m/s")
    annual = orbit.annual_stationkeeping_dv(n, f.sma_bias_m, f.correction_cadence_s)
    dlo, dhi = req.annual_dv_budget_m_s
    if annual > dhi:
        verdict = Verdict.FAIL
    elif annual < dlo:
        verdict = Verdict.WARN
    else:
        verdict = Verdict.PASS
    add("orbit", "annual_sk_dv", "annual station-keeping dv", annual, "m/s",
        requirement=f"within [{dlo:g}, {dhi:g}] m/s", verdict=verdict)

    p = s.propulsion
    budget = p.annual_dv_budget_m_s
    add("orbit", "propellant_cold_gas", "annual propellant, cold gas",
        orbit.propellant_mass(s.propulsion_spec(p.cold_gas_isp_s), budget), "kg",
        note=f"Isp {p.cold_gas_isp_s:g} s, dv {budget:g} m/s")
    add("orbit", "propellant_electric", "annual propellant, electric",
        orbit.propellant_mass(s.propulsion_spec(p.electric_isp_s), budget), "kg",
        note=f"Isp {p.electric_isp_s:g} s, dv {budget:g} m/s")
    mass, in_range = orbit.retreat_propellant(
        s.propulsion_spec(p.cold_gas_isp_s), p.retreat_dv_m_s, tuple(p.retreat_dv_range_m_s)
    )
    rlo, rhi = p.retreat_dv_range_m_s
    add("orbit", "retreat_propellant", "retreat propellant, cold gas", mass, "kg",
        requirement=f"retreat dv within [{rlo:g}, {rhi:g}] m/s",
        verdict=Verdict.INFO if in_range else Verdict.WARN, note=f"dv {p.retreat_dv_m_s:g} m/s")

    residual = req.max_pointing_residual_urad * 1e-6
    for which, sep in (("min", f.separation_min_m), ("max", f.separation_max_m)):
        add("orbit", f"pointing_displacement_{which}", f"residual displacement at {which} separation",
            orbit.pointing_displacement(residual, sep), "m",
            note=f"{req.max_pointing_residual_urad:g} µrad x {sep:g} m")
    return n, period, eclipse


def _optics_lines(s: MissionScenario, add, n: float):
    tx = s.tx_spec()
    f = s.formation
    sep_max = f.separation_max_m
    limit = optics.diffraction_divergence(tx)
    add("optics", "diffraction_divergence", "diffraction-limited divergence", limit * 1e6, "µrad")
    add("optics", "design_divergence", "design divergence", tx.design_divergence * 1e6, "µrad",
        requirement=f">= {limit * 1e6:.4g} µrad", verdict=Verdict.PASS)
    add("optics", "diffraction_spot_max", "diffraction-limited spot at max separation",
        optics.spot_diameter(limit, sep_max), "m")
    add("optics", "spot_min", "spot diameter at min separation", optics.spot_diameter(tx.design_divergence, f.separation_min_m), "m")
    add("optics", "spot_max", "spot diameter at max separation", optics.spot_diameter(tx.design_divergence, sep_max), "m")

    jit = s.jitter_spec()
    sigma = optics.combined_jitter(jit)
    limit_res = s.requirements.max_pointing_residual_urad * 1e-6
    add("optics", "combined_jitter", "combined pointing jitter (RSS)", sigma * 1e6, "µrad",
        requirement=f"<= {s.requirements.max_pointing_residual_urad:g} µrad",
        verdict=Verdict.PASS if sigma <= limit_res else Verdict.FAIL)
    add("optics", "lateral_error", "lateral error at max separation", optics.lateral_error(sigma, sep_max), "m")
    ill = optics.combined_jitter(s.illustrative_jitter_spec())
    add("optics", "illustrative_jitter", "conservative jitter case (RSS)", ill * 1e6, "µrad")
    add("optics", "illustrative_lateral_error", "conservative lateral error at max separation",
        optics.lateral_error(ill, sep_max), "m")

    rx = s.receiver_spec(sep_max)
    add("optics", "receiver_radius", "receiver radius", rx.radius, "m")
    add("optics", "capture_static", "capture fraction, centred beam", optics.capture_fraction_static(tx, rx, 0.0), "1",
        note=tx.beam_profile.value)
    est = optics.capture_fraction_jittered(tx, rx, jit, s.optical.mc_samples, s.seed)
    add("optics", "capture_jittered", "capture fraction under jitter", est.mean_fraction, "1",
        note=f"{tx.beam_profile.value}, Monte Carlo")
    add("optics", "capture_jittered_stderr", "capture fraction standard error", est.stderr, "1")
    add("optics", "capture_samples", "Monte Carlo samples", est.sample_count, "samples")

    v = s.optical.relative_velocity_m_s
    if v is None:
        v = n * s.orbit_spec().semimajor_axis
        vnote = "circular orbital speed (upper bound)"
    else:
        vnote = "configured"
    add("optics", "doppler_velocity", "line-of-sight velocity for Doppler", v, "m/s", note=vnote)
    add("optics", "doppler_shift", "Doppler wavelength shift", optics.doppler_wavelength_shift(tx.wavelength, v) * 1e12, "pm")
    return est


def _rf_lines(s: MissionScenario, add):
    spec = s.rf_spec()
    res = rflink.evaluate_rf_link(spec)
    add("rf", "separation", "evaluation range", spec.separation_km, "km")
    add("rf", "fspl", "free-space path loss", res.fspl, "dB")
    add("rf", "n0", "noise spectral density", res.n0, "dBm/Hz")
    add("rf", "c_req", "required carrier power", res.c_req, "dBm")
    add("rf", "eirp_req", "required EIRP", res.eirp_req_dbm, "dBm")
    add("rf", "eirp_req_w", "required EIRP (linear)", res.eirp_req_w * 1e6, "µW")
    add("rf", "p_r", "received power", res.p_r, "dBm")
    add("rf", "noise_power", "noise power", res.noise_power, "dBm")
    add("rf", "cn", "carrier-to-noise ratio", res.cn, "dB")
    add("rf", "ebn0", "achieved Eb/N0", res.ebn0, "dB")
    add("rf", "raw_excess", "Eb/N0 above requirement, before margin", res.raw_excess, "dB")
    if s.requirements.rf_must_close:
        verdict = Verdict.PASS if res.closes else Verdict.FAIL
    else:
        verdict = Verdict.INFO
    add("rf", "excess_margin", "Eb/N0 above requirement plus margin", res.excess_margin, "dB",
        requirement=">= 0 dB", verdict=verdict)
    add("rf", "bandwidth", "noise bandwidth", spec.bandwidth_hz, "Hz",
        requirement=f">= data rate {spec.data_rate_bps:g} bps",
        verdict=Verdict.WARN if spec.bandwidth_below_rate else Verdict.INFO)


def _power_lines(s: MissionScenario, add, period: float, eclipse: float, capture: float):
    chain = s.pte_chain()
    apply = s.apply_capture_fraction
    res = power.power_budget(
        s.panel_spec(), period, eclipse, s.battery_spec(), chain,
        telemetry_power=s.loads.telemetry_power_w, bus_load=s.loads.bus_load_w,
        capture_fraction=capture if apply else 1.0,
    )
    add("power", "panel_power", "solar array power", res.panel_power, "W")
    add("power", "expendable_power", "orbit-average expendable power", res.expendable_power, "W")
    add("power", "orbit_energy", "energy collected per orbit", res.orbit_energy, "Wh")
    add("power", "derated_power", "expendable power after spare capacity", res.derated_power, "W")
    add("power", "derated_energy", "energy after spare capacity", res.derated_energy, "Wh")
    add("power", "battery_mass", "battery mass", res.battery_mass, "kg")
    add("power", "battery_capacity", "battery capacity", res.battery_capacity, "Ah")
    add("power", "telemetry_power", "RF telemetry power", res.telemetry_power, "W")
    add("power", "optical_input_power", "laser electrical input", res.optical_input_power, "W")
    add("power", "pte_total", "power transfer efficiency", res.pte_total, "1")
    add("power", "pte_display", "power transfer efficiency (3 decimals)", round(res.pte_total, 3), "1")
    add("power", "delivered_power", "delivered power at host", res.delivered_power, "W",
        requirement=f">= {s.requirements.min_delivered_power_w:g} W",
        verdict=Verdict.PASS if res.delivered_power >= s.requirements.min_delivered_power_w else Verdict.FAIL,
        note="capture fraction applied" if apply else "no spillover applied")
    opt_in, delivered = power.display_precision_delivered(res.derated_power, res.telemetry_power + res.bus_load, chain)
    add("power", "delivered_power_display", "delivered power, display-rounded inputs", delivered, "W",
        note=f"{opt_in:g} W x {round(res.pte_total, 3):g}")


def evaluate(scenario: MissionScenario) -> MissionReport:
    lines: list[BudgetLine] = []

    def add(domain, name, label, value, unit, requirement="", verdict=Verdict.INFO, note=""):
        lines.append(BudgetLine(domain, name, label, value, unit, requirement, verdict, note))

    def run(domain, fn, *args):
        try:
            return fn(scenario, add, *args)
        except (DomainError, ValueError, ZeroDivisionError) as exc:
            raise EvaluationError(domain, str(exc)) from exc

    n, period, eclipse = run("orbit", _orbit_lines)
    est = run("optics", _optics_lines, n)
    run("rf", _rf_lines)
    run("power", _power_lines, period, eclipse, est.mean_fraction)

    provenance = {
        "scenario_hash": scenario.digest(),
        "seed": scenario.seed,
        "tool_version": __version__,
        "rng": optics.RNG_ALGORITHM,
    }
    return MissionReport(tuple(lines), provenance, scenario.name)


# -- sweeps ---------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    value: Any
    cells: dict
    verdict: str
    error: str = ""


@dataclass(frozen=True)
class SweepTable:
    parameter: str
    columns: tuple
    rows: tuple

    def column(self, key: str) -> list:
        return [row.cells.get(key) for row in self.rows]

    def to_dict(self) -> dict:
        return {
            "schema": "paddlesat.sweep/1",
            "parameter": self.parameter,
            "columns": list(self.columns),
            "rows": [
                {"value": r.value, "verdict": r.verdict, "error": r.error,
                 "cells": {c: r.cells.get(c) for c in self.columns}}
                for r in self.rows
            ],
        }


def _scenario_raw(scenario: MissionScenario | dict) -> dict:
    if isinstance(scenario, dict):
        return copy.deepcopy(scenario)
    return scenario.to_dict()


def sweep(
    scenario: MissionScenario | dict,
    path: str,
    values: list,
    lines: list[str] | None = None,
    workers: int = 1,
) -> SweepTable:
    """Evaluate the scenario once per value of ``path``; rows share no state."""
    base = _scenario_raw(scenario)
    if not _field_exists(path.split(".")):
        raise ScenarioValidationError(path, "unknown parameter path")

    def one(value) -> tuple[SweepRow, list[str]]:
        raw = copy.deepcopy(base)
        try:
            set_path(raw, path, value)
            report = evaluate(scenario_from_dict(raw))
        except (ScenarioError, EvaluationError) as exc:
            return SweepRow(value, {}, "error", str(exc)), []
        keys = [k for k in report.keys() if lines is None or k in lines]
        cells = {k: report.value(k) for k in keys}
        return SweepRow(value, cells, report.overall_verdict.value), keys

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, values))
    else:
        results = [one(v) for v in values]

    if lines is not None:
        unknown = [k for k in lines if all(k not in keys for _, keys in results)]
        if unknown and any(keys for _, keys in results):
            raise ScenarioValidationError(",".join(unknown), "unknown report line")
        columns = list(lines)
    else:
        columns = []
        for _, keys in results:
            for k in keys:
                if k not in columns:
                    columns.append(k)
    return SweepTable(path, tuple(columns), tuple(r for r, _ in results))


def render_sweep(table: SweepTable, fmt: str = "text") -> bytes:
    if fmt == "machine":
        return (json.dumps(table.to_dict(), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    header = [table.parameter, *table.columns, "verdict"]
    body = []
    for r in table.rows:
        cells = [f"{canonical(r.cells[c]):.6g}" if c in r.cells else "-" for c in table.columns]
        body.append([str(r.value), *cells, r.verdict if not r.error else f"error: {r.error}"])
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    out = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *body]]
    return ("\n".join(out) + "\n").encode("utf-8")


# -- schema documentation --------------------------------------------------------


def schema_entries() -> list[dict]:
    entries = []
    for key, (tp, default, doc) in TOP_LEVEL.items():
        entries.append({"path": key, "type": _type_name(tp), "default": default, "unit": "", "doc": doc, "constraints": ""})
    for name, cls in SECTIONS.items():
        proto = cls()
        for f in dataclasses.fields(cls):
            checks = f.metadata.get("checks", {})
            constraint = ", ".join(
                f"{'one of ' + '|'.join(v) if k == 'choices' else {'gt': '>', 'ge': '>=', 'lt': '<', 'le': '<='}[k] + ' ' + str(v)}"
                for k, v in checks.items()
            )
            entries.append({
                "path": f"{name}.{f.name}",
                "type": _type_name(_field_type(f)) + (" (optional)" if getattr(proto, f.name) is None else ""),
                "default": getattr(proto, f.name),
                "unit": f.metadata.get("unit", ""),
                "doc": f.metadata.get("doc", ""),
                "constraints": constraint,
            })
    return entries


def render_schema(fmt: str = "text") -> bytes:
    entries = schema_entries()
    if fmt == "machine":
        doc = {"schema": f"paddlesat.scenario/{SCHEMA_VERSION}", "fields": entries}
        return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    header = ["path", "type", "default", "unit", "constraints", "description"]
    rows = [[e["path"], e["type"], "-" if e["default"] is None else json.dumps(e["default"], ensure_ascii=False),
             e["unit"], e["constraints"], e["doc"]] for e in entries]
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    out = [f"Scenario schema v{SCHEMA_VERSION} (TOML; every field optional)"]
    out += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [header, *rows]]
    return ("\n".join(out) + "\n").encode("utf-8")
