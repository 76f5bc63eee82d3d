"""Unit-aware values and the fixed conversion constants used by the model.

Units are parsed from short strings such as ``"USD/GJ_HHV"`` or
``"USD/kW/yr"``.  Each unit is a product of base dimensions with integer
exponents and a scale relative to the canonical unit of each dimension:

    energy_HHV, energy_LHV   GJ
    mass (fuel)              kg
    co2 (emitted mass)       kg CO2
    ch4                      kg CH4
    volume_gallon            gal
    currency                 USD (2022)
    time_year                yr (8760 h)

Heating-value bases are kept apart on purpose: moving between HHV and LHV,
or between fuel mass and fuel energy, needs a ``FuelProperties`` record.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

from fuelpath.errors import (
    IncompatibleDimensions,
    InvariantViolation,
    MissingFuelProperties,
    NonPositiveIndex,
    UnknownUnit,
)

GJ_PER_MMBTU = 1.055
GJ_PER_KWH = 0.0036
HOURS_PER_YEAR = 8760.0
LITRES_PER_GALLON = 3.78541

ENERGY_HHV = "energy_HHV"
ENERGY_LHV = "energy_LHV"
MASS = "mass"
CO2 = "co2"
CH4 = "ch4"
VOLUME = "volume_gallon"
CURRENCY = "currency"
TIME = "time_year"

# symbol -> (dimension exponents, scale in canonical units)
_ATOMS: dict[str, tuple[dict[str, int], float]] = {
    "1": ({}, 1.0),
    "%": ({}, 0.01),
    "GJ": ({ENERGY_HHV: 1}, 1.0),
    "GJ_HHV": ({ENERGY_HHV: 1}, 1.0),
    "GJ_LHV": ({ENERGY_LHV: 1}, 1.0),
    "MJ": ({ENERGY_HHV: 1}, 1e-3),
    "MJ_HHV": ({ENERGY_HHV: 1}, 1e-3),
    "MJ_LHV": ({ENERGY_LHV: 1}, 1e-3),
    "MMBtu": ({ENERGY_HHV: 1}, GJ_PER_MMBTU),
    "MMBtu_HHV": ({ENERGY_HHV: 1}, GJ_PER_MMBTU),
    "MMBtu_LHV": ({ENERGY_LHV: 1}, GJ_PER_MMBTU),
    "kWh": ({ENERGY_HHV: 1}, GJ_PER_KWH),
    "MWh": ({ENERGY_HHV: 1}, GJ_PER_KWH * 1e3),
    "kW": ({ENERGY_HHV: 1, TIME: -1}, GJ_PER_KWH * HOURS_PER_YEAR),
    "MW": ({ENERGY_HHV: 1, TIME: -1}, GJ_PER_KWH * HOURS_PER_YEAR * 1e3),
    "g": ({MASS: 1}, 1e-3),
    "kg": ({MASS: 1}, 1.0),
    "t": ({MASS: 1}, 1e3),
    "gCO2": ({CO2: 1}, 1e-3),
    "kgCO2": ({CO2: 1}, 1.0),
    "tCO2": ({CO2: 1}, 1e3),
    "MtCO2": ({CO2: 1}, 1e9),
    "gCO2e": ({CO2: 1}, 1e-3),
    "kgCO2e": ({CO2: 1}, 1.0),
    "tCO2e": ({CO2: 1}, 1e3),
    "gCH4": ({CH4: 1}, 1e-3),
    "kgCH4": ({CH4: 1}, 1.0),
    "tCH4": ({CH4: 1}, 1e3),
    "gal": ({VOLUME: 1}, 1.0),
    "L": ({VOLUME: 1}, 1.0 / LITRES_PER_GALLON),
    "USD": ({CURRENCY: 1}, 1.0),
    "MUSD": ({CURRENCY: 1}, 1e6),
    "RIN": ({}, 1.0),
    "yr": ({TIME: 1}, 1.0),
    "h": ({TIME: 1}, 1.0 / HOURS_PER_YEAR),
    "day": ({TIME: 1}, 24.0 / HOURS_PER_YEAR),
}


def _freeze(dims: dict[str, int]) -> tuple[tuple[str, int], ...]:
    return tuple(sorted((k, v) for k, v in dims.items() if v != 0))


@dataclass(frozen=True)
class Unit:
    """A dimension signature plus a scale factor to canonical units."""

    dims: tuple[tuple[str, int], ...]
    scale: float
    symbol: str = ""

    def dim(self, name: str) -> int:
        return dict(self.dims).get(name, 0)

    def __mul__(self, other: "Unit") -> "Unit":
        merged = dict(self.dims)
        for k, v in other.dims:
            merged[k] = merged.get(k, 0) + v
        return Unit(_freeze(merged), self.scale * other.scale, f"{self.symbol}*{other.symbol}")

    def __truediv__(self, other: "Unit") -> "Unit":
        merged = dict(self.dims)
        for k, v in other.dims:
            merged[k] = merged.get(k, 0) - v
        return Unit(_freeze(merged), self.scale / other.scale, f"{self.symbol}/({other.symbol})")

    def __str__(self) -> str:
        return self.symbol


@lru_cache(maxsize=None)
def parse_unit(text: str) -> Unit:
    """Parse ``"a*b/c/d"`` into a Unit. The first segment is the numerator."""
    text = text.strip()
    if not text:
        raise UnknownUnit("empty unit string")
    parts = text.split("/")
    dims: dict[str, int] = {}
    scale = 1.0
    for i, part in enumerate(parts):
        sign = 1 if i == 0 else -1
        for atom in re.split(r"[*·]", part):
            atom = atom.strip()
            if atom not in _ATOMS:
                raise UnknownUnit(f"unknown unit {atom!r} in {text!r}")
            atom_dims, atom_scale = _ATOMS[atom]
            for k, v in atom_dims.items():
                dims[k] = dims.get(k, 0) + sign * v
            scale *= atom_scale**sign
    return Unit(_freeze(dims), scale, text)


def as_unit(unit: Unit | str) -> Unit:
    return unit if isinstance(unit, Unit) else parse_unit(unit)


@dataclass(frozen=True)
class FuelProperties:
    """Heating value, HHV/LHV ratio and carbon content of one fuel.

    hhv_per_tonne is GJ_HHV per tonne; carbon_content is kg CO2 per GJ_HHV.
    """

    name: str
    hhv_per_tonne: float
    hhv_lhv_ratio: float
    carbon_content: float

    def __post_init__(self):
        if self.hhv_per_tonne <= 0:
            raise InvariantViolation(f"{self.name}: heating value must be positive")
        if self.hhv_lhv_ratio < 1:
            raise InvariantViolation(f"{self.name}: HHV/LHV ratio below 1")
        if self.carbon_content < 0:
            raise InvariantViolation(f"{self.name}: negative carbon content")


@dataclass(frozen=True)
class ConversionConstants:
    """Fixed conversion constants, each in the unit its name implies.

    slf_gal_lhv is GJ_LHV per gallon as written in the LCFS credit formula.
    slf_gal_lhv_mmbtu is the same 0.126 read as MMBtu_LHV per gallon, which
    is the basis behind the 10.7 kg/gal fossil jet CI and the RIN ratio.
    """

    h2_hhv: float = 142.0
    slf_gal_lhv: float = 0.126
    slf_gal_lhv_mmbtu: float = 0.126
    ethanol_gal_lhv: float = 0.077
    gj_per_mmbtu: float = GJ_PER_MMBTU
    kwh_per_gj: float = 277.78
    slf_gal_per_mmbtu: float = 7.9

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise InvariantViolation(f"conversion constant {name} must be positive")

    @property
    def h2_gj_per_kg(self) -> float:
        return self.h2_hhv / 1000.0


@dataclass(frozen=True)
class Quantity:
    """A float tied to a unit. Sums across dimensions are rejected."""

    value: float
    unit: Unit

    @classmethod
    def of(cls, value: float, unit: Unit | str) -> "Quantity":
        return cls(float(value), as_unit(unit))

    def to(self, target: Unit | str, props: FuelProperties | None = None) -> "Quantity":
        return convert(self, target, props)

    def magnitude(self, target: Unit | str, props: FuelProperties | None = None) -> float:
        return convert(self, target, props).value

    def _same(self, other: "Quantity", op: str) -> float:
        if not isinstance(other, Quantity):
            raise IncompatibleDimensions(f"cannot {op} {self.unit} and a bare number")
        if other.unit.dims != self.unit.dims:
            raise IncompatibleDimensions(f"cannot {op} {self.unit} and {other.unit}")
        return other.value * other.unit.scale / self.unit.scale

    def __add__(self, other: "Quantity") -> "Quantity":
        return Quantity(self.value + self._same(other, "add"), self.unit)

    def __sub__(self, other: "Quantity") -> "Quantity":
        return Quantity(self.value - self._same(other, "subtract"), self.unit)

    def __neg__(self) -> "Quantity":
        return Quantity(-self.value, self.unit)

    def __mul__(self, other):
        if isinstance(other, Quantity):
            return Quantity(self.value * other.value, self.unit * other.unit)
        return Quantity(self.value * other, self.unit)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Quantity):
            return Quantity(self.value / other.value, self.unit / other.unit)
        return Quantity(self.value / other, self.unit)

    def __str__(self) -> str:
        return f"{self.value:g} {self.unit}"


def _to_hhv_basis(unit: Unit, props: FuelProperties | None) -> tuple[dict[str, int], float]:
    """Fold LHV energy and fuel mass exponents into HHV energy."""
    dims = dict(unit.dims)
    factor = unit.scale
    lhv = dims.pop(ENERGY_LHV, 0)
    mass = dims.pop(MASS, 0)
    if lhv or mass:
        if props is None:
            raise MissingFuelProperties(f"converting {unit} needs fuel properties")
        # 1 GJ_LHV = ratio GJ_HHV; 1 kg = hhv/1000 GJ_HHV
        factor *= props.hhv_lhv_ratio**lhv * (props.hhv_per_tonne / 1000.0) ** mass
        dims[ENERGY_HHV] = dims.get(ENERGY_HHV, 0) + lhv + mass
    return {k: v for k, v in dims.items() if v}, factor


def _folded_dims(unit: Unit) -> dict[str, int]:
    dims = dict(unit.dims)
    moved = dims.pop(ENERGY_LHV, 0) + dims.pop(MASS, 0)
    if moved:
        dims[ENERGY_HHV] = dims.get(ENERGY_HHV, 0) + moved
    return {k: v for k, v in dims.items() if v}


def convert(q: Quantity, target: Unit | str, props: FuelProperties | None = None) -> Quantity:
    """Express ``q`` in ``target`` units.

    Same-dimension conversions are pure rescaling.  Conversions that move
    between HHV and LHV energy, or between fuel mass and energy, use props.
    """
    tgt = as_unit(target)
    if q.unit.dims == tgt.dims:
        return Quantity(q.value * q.unit.scale / tgt.scale, tgt)
    if _folded_dims(q.unit) != _folded_dims(tgt):
        raise IncompatibleDimensions(f"cannot convert {q.unit} to {tgt}")
    src_dims, src_factor = _to_hhv_basis(q.unit, props)
    tgt_dims, tgt_factor = _to_hhv_basis(tgt, props)
    if src_dims != tgt_dims:
        raise IncompatibleDimensions(f"cannot convert {q.unit} to {tgt}")
    return Quantity(q.value * src_factor / tgt_factor, tgt)


def escalate_cost(value: float, index_from: float, index_to: float) -> float:
    """Move a cost between years with a plant cost index ratio."""
    if not (index_from > 0 and index_to > 0) or math.isnan(index_from) or math.isnan(index_to):
        raise NonPositiveIndex(f"cost indices must be positive, got {index_from}, {index_to}")
    return value * index_to / index_from
