"""Scalar quantities and decibel arithmetic.

Everything downstream computes in SI base units and plain floats; the types
here exist for the I/O boundary (scenario files, reports) and for the dB
algebra, where mixing references is the classic link-budget mistake.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class DomainError(ValueError):
    """An argument lies outside the domain of a physical formula."""


def require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


class Dimension(enum.Enum):
    LENGTH = "length"
    TIME = "time"
    ANGLE = "angle"
    POWER = "power"
    ENERGY = "energy"
    MASS = "mass"
    FREQUENCY = "frequency"
    DATA_RATE = "data rate"
    VOLTAGE = "voltage"
    CHARGE = "charge"
    VELOCITY = "velocity"
    ANGULAR_RATE = "angular rate"
    DIMENSIONLESS = "dimensionless"


class Unit(enum.Enum):
    """Units used by the mission budgets, as (symbol, dimension, SI scale)."""

    M = ("m", Dimension.LENGTH, 1.0)
    MM = ("mm", Dimension.LENGTH, 1e-3)
    CM = ("cm", Dimension.LENGTH, 1e-2)
    KM = ("km", Dimension.LENGTH, 1e3)
    S = ("s", Dimension.TIME, 1.0)
    DAY = ("day", Dimension.TIME, 86400.0)
    RAD = ("rad", Dimension.ANGLE, 1.0)
    URAD = ("µrad", Dimension.ANGLE, 1e-6)
    DEG = ("deg", Dimension.ANGLE, math.pi / 180.0)
    W = ("W", Dimension.POWER, 1.0)
    MW = ("mW", Dimension.POWER, 1e-3)
    UW = ("µW", Dimension.POWER, 1e-6)
    WH = ("Wh", Dimension.ENERGY, 3600.0)
    J = ("J", Dimension.ENERGY, 1.0)
    KG = ("kg", Dimension.MASS, 1.0)
    G = ("g", Dimension.MASS, 1e-3)
    HZ = ("Hz", Dimension.FREQUENCY, 1.0)
    KHZ = ("kHz", Dimension.FREQUENCY, 1e3)
    GHZ = ("GHz", Dimension.FREQUENCY, 1e9)
    BPS = ("bps", Dimension.DATA_RATE, 1.0)
    V = ("V", Dimension.VOLTAGE, 1.0)
    AH = ("Ah", Dimension.CHARGE, 3600.0)
    M_PER_S = ("m/s", Dimension.VELOCITY, 1.0)
    RAD_PER_S = ("rad/s", Dimension.ANGULAR_RATE, 1.0)
    DIMENSIONLESS = ("1", Dimension.DIMENSIONLESS, 1.0)

    def __init__(self, symbol: str, dimension: Dimension, scale: float):
        self.symbol = symbol
        self.dimension = dimension
        self.scale = scale


@dataclass(frozen=True)
class Quantity:
    value: float
    unit: Unit

    def __post_init__(self):
        object.__setattr__(self, "value", require_finite("quantity value", self.value))

    def to(self, unit: Unit) -> Quantity:
        if unit.dimension is not self.unit.dimension:
            raise DomainError(f"cannot convert {self.unit.symbol} to {unit.symbol}")
        if unit is self.unit:
            return self
        return Quantity(self.value * self.unit.scale / unit.scale, unit)

    @property
    def si(self) -> float:
        return self.value * self.unit.scale

    def __add__(self, other: Quantity) -> Quantity:
        if not isinstance(other, Quantity):
            return NotImplemented
        return Quantity(self.value + other.to(self.unit).value, self.unit)

    def __sub__(self, other: Quantity) -> Quantity:
        if not isinstance(other, Quantity):
            return NotImplemented
        return Quantity(self.value - other.to(self.unit).value, self.unit)

    def __mul__(self, k: float) -> Quantity:
        if isinstance(k, Quantity):
            raise TypeError("derived units are not supported")
        return Quantity(self.value * k, self.unit)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"{self.value:g} {self.unit.symbol}"


class DbRef(enum.Enum):
    DB = "dB"
    DBM = "dBm"
    DBW = "dBW"
    DBI = "dBi"
    DBHZ = "dBHz"

    @property
    def absolute(self) -> bool:
        return self in (DbRef.DBM, DbRef.DBW)


@dataclass(frozen=True)
class Decibel:
    """A level in dB with its reference.

    Ratios (dB, dBi, dBHz) add freely. An absolute power (dBm, dBW) plus a
    ratio stays absolute; the difference of two absolute powers is a ratio.
    Adding two absolute powers is meaningless and raises ``TypeError``.
    """

    db_value: float
    reference: DbRef = DbRef.DB

    def __post_init__(self):
        if isinstance(self.db_value, Decibel):
            raise TypeError("a Decibel cannot wrap another Decibel")
        object.__setattr__(self, "db_value", require_finite("dB value", self.db_value))

    def to(self, reference: DbRef) -> Decibel:
        if reference is self.reference:
            return self
        if {self.reference, reference} == {DbRef.DBM, DbRef.DBW}:
            shift = 30.0 if reference is DbRef.DBM else -30.0
            return Decibel(self.db_value + shift, reference)
        raise TypeError(f"cannot re-reference {self.reference.value} as {reference.value}")

    def __add__(self, other: Decibel) -> Decibel:
        if not isinstance(other, Decibel):
            return NotImplemented
        if self.reference.absolute and other.reference.absolute:
            raise TypeError(
                f"cannot add two absolute levels ({self.reference.value} + {other.reference.value})"
            )
        if self.reference.absolute:
            return Decibel(self.db_value + other.db_value, self.reference)
        if other.reference.absolute:
            return Decibel(self.db_value + other.db_value, other.reference)
        return Decibel(self.db_value + other.db_value, DbRef.DB)

    def __sub__(self, other: Decibel) -> Decibel:
        if not isinstance(other, Decibel):
            return NotImplemented
        if self.reference.absolute and other.reference.absolute:
            return Decibel(self.db_value - other.to(self.reference).db_value, DbRef.DB)
        if other.reference.absolute:
            raise TypeError("cannot subtract an absolute level from a ratio")
        ref = self.reference if self.reference.absolute else DbRef.DB
        return Decibel(self.db_value - other.db_value, ref)

    def __neg__(self) -> Decibel:
        if self.reference.absolute:
            raise TypeError("cannot negate an absolute level")
        return Decibel(-self.db_value, self.reference)

    def to_watts(self) -> float:
        if not self.reference.absolute:
            raise TypeError(f"{self.reference.value} is not a power level")
        return ratio_from_db(self.to(DbRef.DBW).db_value)

    def __str__(self) -> str:
        return f"{self.db_value:.2f} {self.reference.value}"


def db_from_ratio(r: float) -> float:
    """Return ``10*log10(r)`` for a strictly positive, finite ratio."""
    if isinstance(r, Decibel):
        raise TypeError("value is already in dB")
    r = require_finite("ratio", r)
    if r <= 0.0:
        raise DomainError(f"ratio must be > 0, got {r!r}")
    return 10.0 * math.log10(r)


def ratio_from_db(d: float | Decibel) -> float:
    if isinstance(d, Decibel):
        d = d.db_value
    d = require_finite("dB value", d)
    return 10.0 ** (d / 10.0)


def dbm_from_watts(p: float) -> float:
    return db_from_ratio(p) + 30.0


def watts_from_dbm(p_dbm: float) -> float:
    return ratio_from_db(p_dbm - 30.0)
