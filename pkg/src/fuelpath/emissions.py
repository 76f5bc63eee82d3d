"""Attributional lifecycle carbon intensity (GWP-100) for H2 and liquid-fuel pathways.

Every pathway is reduced to a carbon ledger per GJ_HHV of product.  Carbon
enters as feedstock carbon (fossil, or neutral when biogenic or taken from
the air) and leaves as vented CO2, sequestered CO2, CO2 exported to a buyer,
or carbon embodied in the product.  The CI is

    upstream emissions + vented fossil CO2 + exported fossil CO2
    - sequestered neutral CO2

Product carbon always comes from neutral sources in the modeled pathways,
so burning the fuel adds nothing.  Electricity flows carry no emissions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from fuelpath.errors import NotHydrogenPathway, NotSlfPathway
from fuelpath.quantities import Quantity
from fuelpath.techdata.dataset import CIBenchmarks, Dataset, Facility, PathwayChain
from fuelpath.techdata.derivations import fermentation_capturable

__all__ = [
    "CIBenchmarks",
    "CarbonIntensity",
    "CarbonLedger",
    "biomass_slf_ci",
    "ethanol_capturable_co2",
    "ethanol_ccs_ci",
    "h2_ci",
    "pathway_ledger",
    "slf_ci",
]

BASES = ("per_kg_H2", "per_GJ_HHV", "per_GJ_LHV", "per_MMBtu_LHV", "per_gal_SLF")


@dataclass(frozen=True)
class CarbonLedger:
    """Carbon flows in kg CO2 per GJ_HHV of product, split by origin."""

    input_fossil: float = 0.0
    input_neutral: float = 0.0
    vented_fossil: float = 0.0
    vented_neutral: float = 0.0
    sequestered_fossil: float = 0.0
    sequestered_neutral: float = 0.0
    exported_fossil: float = 0.0
    exported_neutral: float = 0.0
    product: float = 0.0
    upstream: float = 0.0

    @property
    def input_carbon(self) -> float:
        return self.input_fossil + self.input_neutral

    @property
    def outputs(self) -> float:
        return (self.vented_fossil + self.vented_neutral + self.sequestered_fossil + self.sequestered_neutral
                + self.exported_fossil + self.exported_neutral + self.product)

    @property
    def residual(self) -> float:
        return self.input_carbon - self.outputs

    @property
    def ghg(self) -> float:
        """Lifecycle emissions, kg CO2e per GJ_HHV of product."""
        return self.upstream + self.vented_fossil + self.exported_fossil - self.sequestered_neutral

    def scaled(self, factor: float) -> "CarbonLedger":
        return CarbonLedger(**{k: v * factor for k, v in self.__dict__.items()})

    def __add__(self, other: "CarbonLedger") -> "CarbonLedger":
        return CarbonLedger(**{k: v + getattr(other, k) for k, v in self.__dict__.items()})


def facility_ledger(facility: Facility, sequestered_fraction: float = 1.0) -> CarbonLedger:
    """Ledger of a single conversion facility per GJ of its own output.

    Carbon available for capture is feedstock carbon less product carbon.
    ``sequestered_fraction`` below 1 exports the rest of the captured CO2.
    """
    tech = facility.technology
    feed = facility.feedstock
    if tech is None or feed is None:
        raise ValueError(f"{facility.id} has no technology and feedstock to account for")
    if tech.product != "h2":
        raise ValueError("use pathway_ledger for liquid-fuel facilities")
    carbon_in = tech.ifi * feed.carbon_content
    captured = tech.capture_rate * carbon_in
    stored = captured * sequestered_fraction
    exported = captured - stored
    vented = carbon_in - captured
    if feed.biogenic:
        return CarbonLedger(input_neutral=carbon_in, vented_neutral=vented, sequestered_neutral=stored,
                            exported_neutral=exported, upstream=tech.ifi * feed.upstream_ci)
    return CarbonLedger(input_fossil=carbon_in, vented_fossil=vented, sequestered_fossil=stored,
                        exported_fossil=exported, upstream=tech.ifi * feed.upstream_ci)


def _divert(ledger: CarbonLedger, amount: float) -> CarbonLedger:
    """Send ``amount`` of neutral CO2 from the H2 plant into the fuel product.

    The captured stream is drawn first, then the vented stream.
    """
    from_stored = min(amount, ledger.sequestered_neutral)
    from_vented = amount - from_stored
    if from_vented > ledger.vented_neutral + 1e-12:
        raise ValueError("not enough biogenic CO2 at the hydrogen plant to feed synthesis")
    return replace(ledger, sequestered_neutral=ledger.sequestered_neutral - from_stored,
                   vented_neutral=ledger.vented_neutral - from_vented,
                   product=ledger.product + amount)


def ethanol_capturable_co2(ethanol_hhv: float = 29.7, co2_per_kg: float = 1.91, share: float = 0.5) -> float:
    """Fermentation CO2 available for capture, kg per GJ_HHV of ethanol.

    Fermentation releases one CO2 per ethanol, i.e. half the carbon that ends
    up in ethanol.  The carbon content is rounded to whole kg per GJ before
    halving, which gives the stored 64 and 32.
    """
    return fermentation_capturable(ethanol_hhv, co2_per_kg, share)


def ethanol_ccs_ci(base_ci: float = 50.0, capture_fraction: float = 1.0) -> float:
    """Upstream CI of ethanol when fermentation CO2 is captured and stored, kg/GJ_HHV."""
    if not 0 <= capture_fraction <= 1:
        raise ValueError("capture fraction must lie in [0, 1]")
    return base_ci - capture_fraction * ethanol_capturable_co2()


def _h2_ledger(chain: PathwayChain, sequestered_fraction: float) -> CarbonLedger:
    return facility_ledger(chain.main_facility, sequestered_fraction)


def _slf_ledger(ds: Dataset, chain: PathwayChain) -> CarbonLedger:
    main = chain.main_facility
    tech = main.technology
    product_carbon = ds.fuels["slf"].carbon_content
    if main.fed_by_hydrogen:
        h2 = facility_ledger(chain.h2_facility).scaled(tech.ifi)
        if chain.co2_source == "DAC":
            return h2 + CarbonLedger(input_neutral=tech.co2_demand, product=tech.co2_demand)
        if chain.co2_source == "biogenic_internal":
            return _divert(h2, tech.co2_demand)
        raise ValueError(f"{chain.id}: unsupported CO2 source {chain.co2_source}")
    feed = main.feedstock
    carbon_in = tech.ifi * feed.carbon_content
    available = carbon_in - product_carbon
    if available < -1e-9:
        raise ValueError(f"{chain.id}: product carries more carbon than the feedstock supplies")
    captured = tech.capture_rate * available
    ledger = CarbonLedger(input_neutral=carbon_in, vented_neutral=available - captured,
                          sequestered_neutral=captured, product=product_carbon,
                          upstream=tech.ifi * feed.upstream_ci)
    if feed.fermentation_co2:
        # Fermentation CO2 from the ethanol plant. The ethanol CI already nets
        # any capture, so the gross upstream is restored before crediting it.
        ferment = tech.ifi * feed.fermentation_co2
        stored = tech.ifi * feed.fermentation_capture
        ledger = ledger + CarbonLedger(input_neutral=ferment, vented_neutral=ferment - stored)
        ledger = replace(ledger, sequestered_neutral=ledger.sequestered_neutral + stored,
                         upstream=ledger.upstream + stored)
    return ledger


def pathway_ledger(ds: Dataset, chain: PathwayChain, sequestered_fraction: float = 1.0) -> CarbonLedger:
    """Carbon ledger of a whole pathway per GJ_HHV of its final product."""
    if chain.product == "h2":
        return _h2_ledger(chain, sequestered_fraction)
    return _slf_ledger(ds, chain)


def h2_ci(ds: Dataset, chain: PathwayChain, sequestered_fraction: float = 1.0) -> float:
    """Lifecycle CI of hydrogen, kg CO2e per kg H2."""
    if chain.product != "h2":
        raise NotHydrogenPathway(f"{chain.id} makes {chain.product}, not hydrogen")
    return _h2_ledger(chain, sequestered_fraction).ghg * ds.constants.h2_gj_per_kg


def slf_ci_per_gj(ds: Dataset, chain: PathwayChain) -> float:
    """Lifecycle CI of liquid fuel, kg CO2e per GJ_HHV."""
    if chain.product != "slf":
        raise NotSlfPathway(f"{chain.id} makes {chain.product}, not liquid fuel")
    return _slf_ledger(ds, chain).ghg


def slf_ci(ds: Dataset, chain: PathwayChain) -> float:
    """Lifecycle CI of liquid fuel, kg CO2e per MMBtu_LHV."""
    ghg = slf_ci_per_gj(ds, chain)
    return Quantity.of(ghg, "kgCO2e/GJ_HHV").magnitude("kgCO2e/MMBtu_LHV", ds.fuels["slf"])


@dataclass(frozen=True)
class CarbonIntensity:
    """A CI value tagged with its basis."""

    value: float
    basis: str

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown CI basis {self.basis!r}")

    def to(self, basis: str, ds: Dataset) -> "CarbonIntensity":
        """Re-express in another basis; H2 and liquid-fuel bases do not mix."""
        per_gj = self._per_gj_hhv(ds)
        slf = ds.fuels["slf"]
        if basis == "per_GJ_HHV":
            value = per_gj
        elif basis == "per_kg_H2":
            value = per_gj * ds.constants.h2_gj_per_kg
        elif basis == "per_GJ_LHV":
            value = Quantity.of(per_gj, "kgCO2e/GJ_HHV").magnitude("kgCO2e/GJ_LHV", slf)
        elif basis == "per_MMBtu_LHV":
            value = Quantity.of(per_gj, "kgCO2e/GJ_HHV").magnitude("kgCO2e/MMBtu_LHV", slf)
        elif basis == "per_gal_SLF":
            mmbtu = Quantity.of(per_gj, "kgCO2e/GJ_HHV").magnitude("kgCO2e/MMBtu_LHV", slf)
            value = mmbtu * ds.constants.slf_gal_lhv_mmbtu
        else:
            raise ValueError(f"unknown CI basis {basis!r}")
        return CarbonIntensity(value, basis)

    def _per_gj_hhv(self, ds: Dataset) -> float:
        slf = ds.fuels["slf"]
        if self.basis == "per_GJ_HHV":
            return self.value
        if self.basis == "per_kg_H2":
            return self.value / ds.constants.h2_gj_per_kg
        if self.basis == "per_GJ_LHV":
            return Quantity.of(self.value, "kgCO2e/GJ_LHV").magnitude("kgCO2e/GJ_HHV", slf)
        if self.basis == "per_MMBtu_LHV":
            return Quantity.of(self.value, "kgCO2e/MMBtu_LHV").magnitude("kgCO2e/GJ_HHV", slf)
        mmbtu = self.value / ds.constants.slf_gal_lhv_mmbtu
        return Quantity.of(mmbtu, "kgCO2e/MMBtu_LHV").magnitude("kgCO2e/GJ_HHV", slf)


def biomass_slf_ci(eta: float, lhv_factor: bool = True, biomass_mmbtu: float = 18.8,
                    carbon_fraction: float = 0.475, product_carbon: float = 71.0,
                    capture: float = 0.87) -> float:
    """CI of fuel from one tonne of biomass at conversion efficiency ``eta``, kg/MMBtu.

    Product energy is 18.8 MMBtu x eta, times 1.05 when ``lhv_factor`` is set.
    All carbon not leaving in the product is captured at ``capture``; upstream
    biomass emissions are ignored in this simplified study.
    """
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    energy = slf_energy_per_tonne(eta, lhv_factor, biomass_mmbtu)
    biomass_co2 = 1000.0 * carbon_fraction * 44.0 / 12.0
    return (-biomass_co2 + energy * product_carbon) * capture / energy


def slf_energy_per_tonne(eta: float, lhv_factor: bool = True, biomass_mmbtu: float = 18.8) -> float:
    """Fuel energy from one tonne of biomass, MMBtu."""
    return biomass_mmbtu * eta * (1.05 if lhv_factor else 1.0)
