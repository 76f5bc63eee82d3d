"""In-memory dataset: feedstocks, technologies, pathway chains and policy settings."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping

import jsonschema

from fuelpath.errors import (
    DanglingReference,
    IncompatibleDimensions,
    InvariantViolation,
    SchemaError,
    UnknownUnit,
)
from fuelpath.finance import FinancialParams
from fuelpath.policy import RFS_CATEGORIES, PolicySuite, V45Tier
from fuelpath.quantities import GJ_PER_MMBTU, ConversionConstants, FuelProperties, Quantity
from fuelpath.techdata.derivations import fermentation_capturable

HYDROGEN_FEED = "hydrogen"
CO2_SOURCES = ("none", "DAC", "biogenic_internal", "ethanol_fermentation")
BIOGENIC_FEEDSTOCK_PREFIXES = ("biomass", "ethanol")


@dataclass(frozen=True)
class Feedstock:
    """A purchased input. Energy prices are held per GJ_HHV, CO2 and services per tonne."""

    key: str
    kind: str
    price: float
    price_unit: str
    upstream_ci: float
    carbon_content: float = 0.0
    biogenic: bool = False
    fuel: FuelProperties | None = None
    methane_leak: float = 0.0
    credit_45y: bool = False
    q45_variant: str | None = None
    hhv_per_tonne: float | None = None
    density: float | None = None
    fermentation_capture: float = 0.0
    co2_compression: float = 0.0
    fermentation_co2: float = 0.0

    @property
    def price_per_gj(self) -> float:
        """Base price in $/GJ_HHV (before fees or credits folded into the price)."""
        if self.kind not in ("fuel", "electricity"):
            raise InvariantViolation(f"{self.key} is not an energy input")
        q = Quantity.of(self.price, self.price_unit)
        if self.price_unit.endswith("/gal"):
            gj_per_gal = self.density * self.hhv_per_tonne / 1000.0
            return q.magnitude("USD/gal") / gj_per_gal
        return q.magnitude("USD/GJ_HHV")

    @property
    def price_per_t(self) -> float:
        return Quantity.of(self.price, self.price_unit).magnitude("USD/tCO2")


@dataclass(frozen=True)
class TechnologySpec:
    """Performance and cost of one conversion step, per unit of HHV output."""

    key: str
    name: str
    product: str
    feedstock: str
    ifi: float
    coproduct_elec: float
    capture_rate: float
    capex: float
    fom: float
    vom: float
    capacity_factor: float
    co2_demand: float = 0.0

    def __post_init__(self):
        if self.ifi < 1:
            raise InvariantViolation(f"{self.key}: IFI {self.ifi} below 1 would be over-unity")
        if not 0 <= self.capture_rate <= 1:
            raise InvariantViolation(f"{self.key}: capture rate {self.capture_rate} outside [0, 1]")
        if min(self.capex, self.fom, self.vom, self.co2_demand) < 0:
            raise InvariantViolation(f"{self.key}: negative cost or CO2 demand")
        if not 0 <= self.capacity_factor <= 1:
            raise InvariantViolation(f"{self.key}: capacity factor outside [0, 1]")
        if self.product not in ("h2", "slf"):
            raise InvariantViolation(f"{self.key}: unknown product {self.product}")


@dataclass(frozen=True)
class Facility:
    """One plant in a pathway chain and the credits it may claim.

    With ``select="max"`` the facility takes only the most valuable of its
    listed credits; ``"all"`` stacks them (a counterfactual the rules forbid
    for 45V/45Q/45Z).
    """

    id: str
    technology: TechnologySpec | None
    feedstock: Feedstock | None
    credits: tuple[str, ...] = ()
    select: str = "max"
    q45_variant: str = "sequestration"

    @property
    def fed_by_hydrogen(self) -> bool:
        return self.technology is not None and self.technology.feedstock == HYDROGEN_FEED and self.feedstock is None


@dataclass(frozen=True)
class PathwayChain:
    """An ordered set of facilities that together make one product."""

    id: str
    name: str
    product: str
    facilities: tuple[Facility, ...]
    co2_source: str = "none"
    rfs_category: str = "none"

    @property
    def index(self) -> int:
        return int(self.id[1:])

    def facilities_making(self, product: str) -> list[Facility]:
        return [f for f in self.facilities if f.technology is not None and f.technology.product == product]

    @property
    def main_facility(self) -> Facility:
        """The facility that makes the chain's final product."""
        return self.facilities_making(self.product)[-1]

    @property
    def h2_facility(self) -> Facility | None:
        found = self.facilities_making("h2")
        return found[0] if found else None

    @property
    def co2_facility(self) -> Facility | None:
        """A facility with no technology that supplies CO2 or ethanol."""
        found = [f for f in self.facilities if f.technology is None]
        return found[0] if found else None

    def with_facility(self, facility_id: str, **changes) -> "PathwayChain":
        """Copy of the chain with one facility's fields replaced."""
        facs = tuple(replace(f, **changes) if f.id == facility_id else f for f in self.facilities)
        return replace(self, facilities=facs)


@dataclass(frozen=True)
class CIBenchmarks:
    """Fossil reference carbon intensities."""

    h2_fossil: float = 11.0
    slf_fossil_per_gal: float = 10.7
    slf_fossil_per_mmbtu: float = 85.0


@dataclass(frozen=True)
class Dataset:
    feedstocks: Mapping[str, Feedstock]
    technologies: Mapping[str, TechnologySpec]
    pathways: Mapping[str, PathwayChain]
    policy: PolicySuite
    finance: FinancialParams
    constants: ConversionConstants
    fuels: Mapping[str, FuelProperties]
    benchmarks: CIBenchmarks = field(default_factory=CIBenchmarks)
    scc_bands: Mapping[str, tuple[float, float]] = field(default_factory=dict)
    jet_price: Mapping[str, float] = field(default_factory=dict)

    def pathway(self, pid: str) -> PathwayChain:
        try:
            return self.pathways[pid]
        except KeyError:
            raise DanglingReference(f"no pathway {pid!r}") from None

    def pathway_ids(self, product: str | None = None) -> list[str]:
        return [p.id for p in self.pathways.values() if product is None or p.product == product]


def schema() -> dict:
    """The JSON schema every dataset document must satisfy."""
    text = resources.files("fuelpath.techdata").joinpath("data/dataset.schema.json").read_text()
    return json.loads(text)


def default_dataset_path() -> Path:
    return Path(str(resources.files("fuelpath.techdata").joinpath("data/default_dataset.json")))


def _dotted(path) -> str:
    parts = [str(p) for p in path]
    return ".".join(parts) if parts else "<root>"


def validate_document(document: Mapping[str, Any]) -> None:
    """Raise SchemaError for the first schema violation, reporting its field path."""
    validator = jsonschema.Draft7Validator(schema())
    errors = sorted(validator.iter_errors(document), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        err = errors[0]
        raise SchemaError(_dotted(err.absolute_path), err.message)


def _mag(node: Mapping[str, Any], target: str, path: str, props: FuelProperties | None = None) -> float:
    try:
        return Quantity.of(node["value"], node["unit"]).magnitude(target, props)
    except (IncompatibleDimensions, UnknownUnit) as exc:
        raise SchemaError(path, f"unit {node['unit']!r} is not convertible to {target}: {exc}") from None


def _opt(node: Mapping[str, Any], key: str, target: str, path: str, default=None):
    return _mag(node[key], target, f"{path}.{key}") if key in node else default


def _years(node, path) -> int:
    value = _mag(node, "yr", path)
    if value != int(value):
        raise InvariantViolation(f"{path}: durations must be whole years, got {value}")
    return int(value)


def _build_fuels(doc) -> dict[str, FuelProperties]:
    fuels = {}
    for name, node in doc.items():
        path = f"constants.fuels.{name}"
        fuels[name] = FuelProperties(
            name=name,
            hhv_per_tonne=_mag(node["hhv"], "GJ_HHV/t", f"{path}.hhv"),
            hhv_lhv_ratio=_mag(node["hhv_lhv_ratio"], "1", f"{path}.hhv_lhv_ratio"),
            carbon_content=_mag(node["carbon_content"], "kgCO2/GJ_HHV", f"{path}.carbon_content"),
        )
    if fuels["h2"].carbon_content != 0:
        raise InvariantViolation("hydrogen must carry no carbon")
    return fuels


def _build_constants(doc) -> ConversionConstants:
    p = "constants"
    gj_per_mmbtu = _mag(doc["gj_per_mmbtu"], doc["gj_per_mmbtu"]["unit"], f"{p}.gj_per_mmbtu")
    if doc["gj_per_mmbtu"]["unit"] == "GJ/MMBtu" and not math.isclose(gj_per_mmbtu, GJ_PER_MMBTU, rel_tol=1e-12):
        raise InvariantViolation(f"gj_per_mmbtu {gj_per_mmbtu} disagrees with the unit table ({GJ_PER_MMBTU})")
    return ConversionConstants(
        h2_hhv=_mag(doc["h2_hhv"], "GJ_HHV/t", f"{p}.h2_hhv"),
        slf_gal_lhv=_mag(doc["slf_gal_lhv"], "GJ_LHV/gal", f"{p}.slf_gal_lhv"),
        slf_gal_lhv_mmbtu=_mag(doc["slf_gal_lhv_mmbtu"], "MMBtu_LHV/gal", f"{p}.slf_gal_lhv_mmbtu"),
        ethanol_gal_lhv=_mag(doc["ethanol_gal_lhv"], "MMBtu_LHV/gal", f"{p}.ethanol_gal_lhv"),
        gj_per_mmbtu=gj_per_mmbtu,
        kwh_per_gj=_mag(doc["kwh_per_gj"], "kWh/GJ", f"{p}.kwh_per_gj"),
        slf_gal_per_mmbtu=_mag(doc["slf_gal_per_mmbtu"], "gal/MMBtu_LHV", f"{p}.slf_gal_per_mmbtu"),
    )


def _build_feedstock(key, node, fuels) -> Feedstock:
    path = f"feedstocks.{key}"
    fuel = None
    if "fuel" in node:
        if node["fuel"] not in fuels:
            raise DanglingReference(f"{path}.fuel: no fuel {node['fuel']!r}")
        fuel = fuels[node["fuel"]]
    kind = node["kind"]
    price_unit = node["price"]["unit"]
    hhv = _opt(node, "hhv", "GJ_HHV/t", path)
    density = _opt(node, "density", "kg/gal", path)
    carbon = _opt(node, "carbon_content", "kgCO2/GJ_HHV", path, 0.0)
    fermentation = 0.0
    if "carbon_mass_ratio" in node:
        if hhv is None:
            raise InvariantViolation(f"{path}: carbon_mass_ratio needs an hhv")
        ratio = _mag(node["carbon_mass_ratio"], "kgCO2/kg", f"{path}.carbon_mass_ratio")
        carbon = ratio / (hhv / 1000.0)
        fermentation = fermentation_capturable(hhv, ratio)
    if fuel is not None:
        hhv = fuel.hhv_per_tonne if hhv is None else hhv
    if kind in ("fuel", "electricity"):
        target = "USD/gal" if price_unit.endswith("/gal") else "USD/GJ_HHV"
        if target == "USD/gal" and (density is None or hhv is None):
            raise InvariantViolation(f"{path}: a per-gallon price needs density and hhv")
    else:
        target = "USD/tCO2"
    price = _mag(node["price"], target, f"{path}.price")
    biogenic = bool(node["biogenic"])
    if biogenic and not (kind == "fuel" and key.startswith(BIOGENIC_FEEDSTOCK_PREFIXES)):
        raise InvariantViolation(f"{path}: only biomass and ethanol carbon may be biogenic")
    fs = Feedstock(
        key=key,
        kind=kind,
        price=price,
        price_unit=target,
        upstream_ci=_mag(node["upstream_ci"], "kgCO2e/GJ_HHV", f"{path}.upstream_ci"),
        carbon_content=carbon,
        biogenic=biogenic,
        fuel=fuel,
        methane_leak=_opt(node, "methane_leak", "gCH4/MJ", path, 0.0),
        credit_45y=bool(node.get("credit_45y", False)),
        q45_variant=node.get("q45_variant"),
        hhv_per_tonne=hhv,
        density=density,
        fermentation_capture=_opt(node, "fermentation_capture", "kgCO2/GJ_HHV", path, 0.0),
        co2_compression=_opt(node, "co2_compression", "USD/tCO2", path, 0.0),
        fermentation_co2=fermentation,
    )
    if fs.upstream_ci < 0:
        raise InvariantViolation(f"{path}: upstream CI must be non-negative")
    if fs.fermentation_capture > fs.fermentation_co2 + 1e-9:
        raise InvariantViolation(f"{path}: captures more fermentation CO2 than fermentation releases")
    if fs.price < 0 or fs.carbon_content < 0 or fs.methane_leak < 0:
        raise InvariantViolation(f"{path}: negative price, carbon content or leak rate")
    return fs


def _build_technology(key, node, feedstocks) -> TechnologySpec:
    path = f"technologies.{key}"
    feed = node["feedstock"]
    if feed != HYDROGEN_FEED and feed not in feedstocks:
        raise DanglingReference(f"{path}.feedstock: no feedstock {feed!r}")
    return TechnologySpec(
        key=key,
        name=node["name"],
        product=node["product"],
        feedstock=feed,
        ifi=_mag(node["ifi"], "GJ_HHV/GJ_HHV", f"{path}.ifi"),
        coproduct_elec=_mag(node["coproduct_elec"], "GJ/GJ_HHV", f"{path}.coproduct_elec"),
        capture_rate=_mag(node["capture_rate"], "1", f"{path}.capture_rate"),
        capex=_mag(node["capex"], "USD/kW", f"{path}.capex"),
        fom=_mag(node["fom"], "USD/kW/yr", f"{path}.fom"),
        vom=_mag(node["vom"], "USD/GJ_HHV", f"{path}.vom"),
        capacity_factor=_mag(node["capacity_factor"], "1", f"{path}.capacity_factor"),
        co2_demand=_opt(node, "co2_demand", "kgCO2/GJ_HHV", path, 0.0),
    )


def _build_pathway(i, node, technologies, feedstocks) -> PathwayChain:
    path = f"pathways.{i}"
    facilities = []
    for j, fnode in enumerate(node["facilities"]):
        fpath = f"{path}.facilities.{j}"
        tech = None
        if fnode["technology"] is not None:
            if fnode["technology"] not in technologies:
                raise DanglingReference(f"{fpath}.technology: no technology {fnode['technology']!r}")
            tech = technologies[fnode["technology"]]
        feed_key = fnode.get("feedstock", tech.feedstock if tech else None)
        if feed_key is None:
            raise InvariantViolation(f"{fpath}: a facility without technology needs a feedstock")
        feed = None
        if feed_key != HYDROGEN_FEED:
            if feed_key not in feedstocks:
                raise DanglingReference(f"{fpath}.feedstock: no feedstock {feed_key!r}")
            feed = feedstocks[feed_key]
        variant = fnode.get("q45_variant") or (feed.q45_variant if feed and feed.q45_variant else "sequestration")
        facilities.append(Facility(fnode["id"], tech, feed, tuple(fnode["credits"]), fnode.get("select", "max"), variant))
    chain = PathwayChain(node["id"], node["name"], node["product"], tuple(facilities),
                         node["co2_source"], node["rfs_category"])
    makers = chain.facilities_making(chain.product)
    if not makers:
        raise InvariantViolation(f"{path}: no facility makes the product {chain.product}")
    if chain.rfs_category not in RFS_CATEGORIES or chain.co2_source not in CO2_SOURCES:
        raise InvariantViolation(f"{path}: bad RFS category or CO2 source")
    for f in chain.facilities:
        if f.fed_by_hydrogen and chain.h2_facility is None:
            raise InvariantViolation(f"{path}: {f.id} needs hydrogen but the chain makes none")
    if chain.co2_source == "DAC" and not any(f.feedstock and f.feedstock.kind == "co2" for f in chain.facilities):
        raise InvariantViolation(f"{path}: DAC chain without a CO2 supply facility")
    return chain


def _build_policy(doc, book_life) -> PolicySuite:
    p = "policy"
    tiers = []
    for i, t in enumerate(doc["v45_tiers"]):
        tp = f"{p}.v45_tiers.{i}"
        lower = -math.inf if t["ci_lower"] is None else _mag(t["ci_lower"], "kgCO2e/kg", f"{tp}.ci_lower")
        tiers.append(V45Tier(lower, _mag(t["ci_upper"], "kgCO2e/kg", f"{tp}.ci_upper"),
                             _mag(t["credit"], "USD/kg", f"{tp}.credit")))
    z = doc["z45"]
    suite = PolicySuite(
        v45_tiers=tuple(tiers),
        q45_rates={k: _mag(v, "USD/tCO2", f"{p}.q45_rates.{k}") for k, v in doc["q45_rates"].items()},
        z45_base_saf=_mag(z["base_saf"], "USD/gal", f"{p}.z45.base_saf"),
        z45_base_other=_mag(z["base_other"], "USD/gal", f"{p}.z45.base_other"),
        z45_ci_pivot=_mag(z["ci_pivot"], "kgCO2e/MMBtu_LHV", f"{p}.z45.ci_pivot"),
        saf_fraction=_mag(z["saf_fraction"], "1", f"{p}.z45.saf_fraction"),
        y45_rate=_mag(doc["y45_rate"], "USD/MWh", f"{p}.y45_rate"),
        methane_fee=_mag(doc["methane_fee"], "USD/tCH4", f"{p}.methane_fee"),
        durations={k: _years(v, f"{p}.durations.{k}") for k, v in doc["durations"].items()},
        rin_equivalence=_mag(doc["rin_equivalence"], "1", f"{p}.rin_equivalence"),
        lcfs_benchmark=_mag(doc["lcfs_benchmark"], "kgCO2e/GJ_LHV", f"{p}.lcfs_benchmark"),
        lcfs_benchmark_2022=_opt(doc, "lcfs_benchmark_2022", "kgCO2e/GJ_LHV", p, 89.37),
        b40={k: _mag(v, "USD/gal", f"{p}.b40.{k}") for k, v in doc.get("b40", {}).items()},
    )
    suite.check_durations(book_life)
    return suite


def _build_finance(doc) -> FinancialParams:
    p = "finance"
    return FinancialParams(
        wacc=_mag(doc["wacc"], "1", f"{p}.wacc"),
        book_life_years=_years(doc["book_life_years"], f"{p}.book_life_years"),
        capacity_factor=_mag(doc["capacity_factor"], "1", f"{p}.capacity_factor"),
        crf=_opt(doc, "crf", "1/yr", p),
    )


def load_dataset(document: Mapping[str, Any] | str | Path, verify: bool = False) -> Dataset:
    """Validate a dataset document (or a path to one) and cross-link it.

    With ``verify=True`` the derivation oracles are re-run and any stored
    row that drifts past its tolerance raises InvariantViolation.
    """
    if isinstance(document, (str, Path)):
        with open(document, encoding="utf-8") as fh:
            document = json.load(fh)
    validate_document(document)
    fuels = _build_fuels(document["constants"]["fuels"])
    constants = _build_constants(document["constants"])
    feedstocks = {k: _build_feedstock(k, v, fuels) for k, v in document["feedstocks"].items()}
    technologies = {k: _build_technology(k, v, feedstocks) for k, v in document["technologies"].items()}
    pathways = {}
    for i, node in enumerate(document["pathways"]):
        chain = _build_pathway(i, node, technologies, feedstocks)
        if chain.id in pathways:
            raise InvariantViolation(f"pathways.{i}: duplicate id {chain.id}")
        pathways[chain.id] = chain
    finance = _build_finance(document["finance"])
    policy = _build_policy(document["policy"], finance.book_life_years)
    c = document["constants"]
    bench = c["benchmarks"]
    benchmarks = CIBenchmarks(
        h2_fossil=_mag(bench["h2_fossil"], "kgCO2e/kg", "constants.benchmarks.h2_fossil"),
        slf_fossil_per_gal=_mag(bench["slf_fossil_per_gal"], "kgCO2e/gal", "constants.benchmarks.slf_fossil_per_gal"),
        slf_fossil_per_mmbtu=_mag(bench["slf_fossil_per_mmbtu"], "kgCO2e/MMBtu_LHV",
                                  "constants.benchmarks.slf_fossil_per_mmbtu"),
    )
    scc = {}
    for year, band in c["scc_bands"].items():
        low = _mag(band["low"], "USD/tCO2e", f"constants.scc_bands.{year}.low")
        high = _mag(band["high"], "USD/tCO2e", f"constants.scc_bands.{year}.high")
        if low > high:
            raise InvariantViolation(f"constants.scc_bands.{year}: low above high")
        scc[year] = (low, high)
    jet = {k: _mag(v, "USD/gal", f"constants.jet_price.{k}") for k, v in c["jet_price"].items()}
    ordered = dict(sorted(pathways.items(), key=lambda kv: kv[1].index))
    ds = Dataset(
        feedstocks=MappingProxyType(feedstocks),
        technologies=MappingProxyType(technologies),
        pathways=MappingProxyType(ordered),
        policy=policy,
        finance=finance,
        constants=constants,
        fuels=MappingProxyType(fuels),
        benchmarks=benchmarks,
        scc_bands=MappingProxyType(scc),
        jet_price=MappingProxyType(jet),
    )
    if verify:
        from fuelpath.techdata.derivations import check_dataset

        failed = [c for c in check_dataset(ds) if not c.passed]
        if failed:
            raise InvariantViolation("; ".join(str(c) for c in failed))
    return ds


def load_document(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def default_document() -> dict:
    return load_document(default_dataset_path())


def load_default_dataset(verify: bool = False) -> Dataset:
    return load_dataset(default_document(), verify=verify)
