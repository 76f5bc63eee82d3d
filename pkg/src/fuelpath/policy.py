"""Policy instruments: IRA credits, the methane fee, RFS RINs and the LCFS."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from fuelpath.errors import InvariantViolation, UnknownVariant

EXCLUSIVE_CREDITS = ("45V", "45Q", "45Z")
INSTRUMENTS = ("45V", "45Q", "45Z", "45Y", "methane_fee", "RFS", "LCFS")
RFS_CATEGORIES = ("none", "D3", "D5", "D6")


@dataclass(frozen=True)
class V45Tier:
    """45V credit paid for lower <= CI < upper (kg CO2e per kg H2)."""

    lower: float
    upper: float
    value: float


DEFAULT_V45_TIERS = (
    V45Tier(-math.inf, 0.45, 3.00),
    V45Tier(0.45, 1.5, 1.002),
    V45Tier(1.5, 2.5, 0.75),
    V45Tier(2.5, 4.0, 0.60),
)

DEFAULT_Q45_RATES = MappingProxyType(
    {"sequestration": 85.0, "utilization": 60.0, "dac_sequestration": 180.0, "dac_utilization": 130.0}
)


def _frozen(mapping) -> Mapping:
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True)
class PolicySuite:
    """Rates, tiers and durations of every modeled instrument (2022 USD)."""

    v45_tiers: tuple[V45Tier, ...] = DEFAULT_V45_TIERS
    q45_rates: Mapping[str, float] = DEFAULT_Q45_RATES
    z45_base_saf: float = 1.75
    z45_base_other: float = 1.00
    z45_ci_pivot: float = 50.0
    saf_fraction: float = 0.82
    y45_rate: float = 26.0
    methane_fee: float = 1500.0
    durations: Mapping[str, int] = field(
        default_factory=lambda: _frozen({"45Q": 12, "45V": 10, "45Y": 10, "methane_fee": 15})
    )
    rin_equivalence: float = 1.64
    lcfs_benchmark: float = 80.36
    lcfs_benchmark_2022: float = 89.37
    b40: Mapping[str, float] = field(default_factory=lambda: _frozen({}))

    def __post_init__(self):
        object.__setattr__(self, "q45_rates", _frozen(self.q45_rates))
        object.__setattr__(self, "durations", _frozen(self.durations))
        object.__setattr__(self, "b40", _frozen(self.b40))
        object.__setattr__(self, "v45_tiers", tuple(sorted(self.v45_tiers, key=lambda t: t.lower)))
        tiers = self.v45_tiers
        if not tiers or tiers[0].lower != -math.inf or tiers[-1].upper != 4.0:
            raise InvariantViolation("45V tiers must cover (-inf, 4.0)")
        for a, b in zip(tiers, tiers[1:]):
            if a.upper != b.lower:
                raise InvariantViolation(f"45V tiers not contiguous at {a.upper} / {b.lower}")
        for t in tiers:
            if t.lower >= t.upper or t.value < 0:
                raise InvariantViolation(f"bad 45V tier {t}")
        rates = [self.z45_base_saf, self.z45_base_other, self.y45_rate, self.methane_fee,
                 self.rin_equivalence, *self.q45_rates.values(), *self.b40.values()]
        if any(r < 0 for r in rates):
            raise InvariantViolation("policy rates must be non-negative")
        if not 0 <= self.saf_fraction <= 1:
            raise InvariantViolation("SAF fraction must lie in [0, 1]")
        if any(d < 0 for d in self.durations.values()):
            raise InvariantViolation("credit durations must be non-negative")

    def check_durations(self, book_life: int) -> None:
        for name, years in self.durations.items():
            if years > book_life:
                raise InvariantViolation(f"{name} lasts {years} years, past the {book_life}-year book life")

    def credit_45v(self, ci: float) -> float:
        return credit_45v(ci, self.v45_tiers)

    def credit_45q(self, variant: str, mass: float) -> float:
        return credit_45q(variant, mass, self.q45_rates)

    def credit_45z_per_gal(self, ci: float) -> float:
        return credit_45z_per_gal(ci, self.saf_fraction, self.z45_base_saf, self.z45_base_other, self.z45_ci_pivot)

    def z45_blend_rate(self) -> float:
        return self.z45_base_saf * self.saf_fraction + self.z45_base_other * (1 - self.saf_fraction)


@dataclass(frozen=True)
class CreditClaim:
    """A credit or fee applied to one facility, in $ per unit of final product.

    Revenues are positive here; the fee is stored as a positive charge.
    """

    instrument: str
    facility_id: str
    derated_value: float

    def __post_init__(self):
        if self.instrument not in INSTRUMENTS:
            raise UnknownVariant(self.instrument)


@dataclass(frozen=True)
class FuelCreditScenario:
    """Liquid-fuel policy settings that vary across sensitivity runs."""

    z45_duration_years: int = 0
    lcfs_price: float = 0.0
    rin_prices: Mapping[str, float] = field(default_factory=lambda: _frozen({"D3": 0.0, "D5": 0.0, "D6": 0.0}))
    lcfs_benchmark: float = 80.36

    def __post_init__(self):
        prices = {"D3": 0.0, "D5": 0.0, "D6": 0.0}
        prices.update(self.rin_prices)
        object.__setattr__(self, "rin_prices", _frozen(prices))
        if self.z45_duration_years < 0:
            raise InvariantViolation("45Z duration cannot be negative")
        if self.lcfs_price < 0 or any(p < 0 for p in prices.values()):
            raise InvariantViolation("scenario prices must be non-negative")

    def check(self, book_life: int) -> None:
        if self.z45_duration_years > book_life:
            raise InvariantViolation(
                f"45Z duration {self.z45_duration_years} exceeds the {book_life}-year book life"
            )


def credit_45v(ci: float, tiers=DEFAULT_V45_TIERS) -> float:
    """Un-derated 45V credit in $/kg H2 for a lifecycle CI in kg CO2e/kg H2."""
    for tier in tiers:
        if tier.lower <= ci < tier.upper:
            return tier.value
    return 0.0


def credit_45z_per_gal(ci: float, saf_fraction: float = 0.82, base_saf: float = 1.75,
                       base_other: float = 1.00, pivot: float = 50.0) -> float:
    """Un-derated 45Z credit in $/gal for a CI in kg CO2e/MMBtu_LHV."""
    if not 0 <= saf_fraction <= 1:
        raise ValueError("saf_fraction must lie in [0, 1]")
    blend = base_saf * saf_fraction + base_other * (1 - saf_fraction)
    return max(0.0, (pivot - ci) / pivot) * blend


def credit_45q(variant: str, mass: float, rates: Mapping[str, float] = DEFAULT_Q45_RATES) -> float:
    """Un-derated 45Q credit in $ for ``mass`` tonnes of CO2."""
    if variant not in rates:
        raise UnknownVariant(f"unknown 45Q variant {variant!r}")
    if mass < 0:
        raise ValueError("captured mass must be non-negative")
    return mass * rates[variant]


def methane_fee_per_gj(leak_rate: float, fee: float) -> float:
    """Fee in $/GJ of gas for a leak rate in g CH4 per MJ and a fee in $/t CH4."""
    if leak_rate < 0:
        raise ValueError("leak rate must be non-negative")
    # g/MJ is kg/GJ; kg -> t is 1e-3
    return leak_rate * fee * 1e-3


def net_input_price_45y(gross_elec: float, rate: float, df: float) -> float:
    """Electricity price after a derated 45Y credit, floored at zero."""
    net = gross_elec - rate * df
    if net < 0:
        warnings.warn(f"45Y credit exceeds electricity price; flooring {net:.3f} at 0", stacklevel=2)
        return 0.0
    return net


def rfs_credit_per_gal(rin_price: float, equivalence: float = 1.64) -> float:
    """RIN revenue per gallon of synthetic fuel."""
    if rin_price < 0:
        raise ValueError("RIN price must be non-negative")
    return rin_price * equivalence


def lcfs_credit_per_gal(ci: float, benchmark: float, price: float, gal_lhv: float = 0.126) -> float:
    """LCFS credit in $/gal; CI and benchmark in kg CO2e/GJ_LHV, price in $/t.

    The result is negative for fuels above the benchmark.
    """
    if price < 0:
        raise ValueError("LCFS price must be non-negative")
    return (benchmark - ci) * gal_lhv * price / 1000.0


def dac_co2_net_cost(gross: float, rate_45q: float, df: float) -> float:
    """DAC CO2 cost in $/t after the derated DAC-utilization 45Q credit."""
    return gross - rate_45q * df


def validate_claims(chain) -> list[str]:
    """Return rule violations for a pathway chain; an empty list means ok.

    Checks that no facility stacks two of 45V/45Q/45Z, that 45Z is only
    claimed where liquid fuel is made, and that RINs are only claimed by
    liquid fuels made directly from biomass or ethanol.
    """
    problems = []
    for fac in chain.facilities:
        unknown = [c for c in fac.credits if c not in INSTRUMENTS]
        for c in unknown:
            problems.append(f"{chain.id}/{fac.id}: unknown instrument {c}")
        exclusive = [c for c in fac.credits if c in EXCLUSIVE_CREDITS]
        if fac.select == "all" and len(exclusive) > 1:
            problems.append(f"{chain.id}/{fac.id}: claims {' and '.join(exclusive)} together")
        if "45Z" in fac.credits and (fac.technology is None or fac.technology.product != "slf"):
            problems.append(f"{chain.id}/{fac.id}: 45Z claimed by a facility that makes no liquid fuel")
    return problems + rfs_problems(chain)


def rfs_problems(chain) -> list[str]:
    """RIN-eligibility violations: only liquid fuel made directly from biomass or ethanol."""
    if chain.rfs_category == "none":
        return []
    if chain.rfs_category not in RFS_CATEGORIES:
        return [f"{chain.id}: unknown RIN category {chain.rfs_category}"]
    if chain.product != "slf":
        return [f"{chain.id}: RINs claimed for a non-liquid product"]
    feed = chain.facilities[-1].feedstock
    if feed is None or not feed.biogenic:
        return [f"{chain.id}: RINs claimed but the fuel is not made directly from biomass"]
    return []
