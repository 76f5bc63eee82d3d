"""Levelized cost of fuel, itemized, and levelized subsidy per tonne mitigated.

Costs are first built per GJ_HHV of product and then expressed per kg of
hydrogen or per gallon of liquid fuel.  Credits are negative items.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from fuelpath.emissions import facility_ledger, slf_ci
from fuelpath.errors import (
    ClaimViolation,
    IneligibleRfsCategory,
    InvariantViolation,
    NoMitigation,
    NotHydrogenPathway,
    NotSlfPathway,
    ZeroCapacityFactor,
)
from fuelpath.finance import FinancialParams
from fuelpath.policy import (
    FuelCreditScenario,
    PolicySuite,
    dac_co2_net_cost,
    lcfs_credit_per_gal,
    methane_fee_per_gj,
    net_input_price_45y,
    rfs_credit_per_gal,
    rfs_problems,
    validate_claims,
)
from fuelpath.quantities import GJ_PER_KWH, HOURS_PER_YEAR, Quantity
from fuelpath.techdata.dataset import CIBenchmarks, Dataset, Facility, Feedstock, PathwayChain, TechnologySpec

COST_LABELS = ("capital", "fom", "vom", "feedstock", "co2_transport_storage", "coproduct_electricity", "dac_co2_net")
CREDIT_LABELS = ("credit_45v", "credit_45q", "credit_45z", "rfs", "lcfs")
LABELS = COST_LABELS + CREDIT_LABELS
# Only present when the biogenic CO2 sale what-if is switched on.
SALE_LABEL = "co2_sale"
SIGNED_LABELS = ("coproduct_electricity",)
AVOIDED_COST_CONVENTIONS = ("none", "storage", "transport_storage")


@dataclass(frozen=True)
class LcofBreakdown:
    """Cost and revenue items of one pathway; ``net`` is their sum."""

    pathway: str
    unit: str
    items: tuple[tuple[str, float], ...]
    ci: float
    ci_unit: str
    selected: tuple[str, ...] = ()
    credit_options: Mapping[str, float] = field(default_factory=dict)
    what_if: tuple[str, ...] = ()
    net: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "credit_options", MappingProxyType(dict(self.credit_options)))
        for label, value in self.items:
            if label not in LABELS and label != SALE_LABEL:
                raise InvariantViolation(f"unknown breakdown item {label!r}")
            if not math.isfinite(value):
                raise InvariantViolation(f"{self.pathway}.{label} is not finite")
            if (label in CREDIT_LABELS or label == SALE_LABEL) and value > 1e-12:
                raise InvariantViolation(f"{self.pathway}.{label} is a revenue but positive ({value})")
            if label in COST_LABELS and label not in SIGNED_LABELS and value < -1e-12:
                raise InvariantViolation(f"{self.pathway}.{label} is a cost but negative ({value})")
        object.__setattr__(self, "net", math.fsum(v for _, v in self.items))

    def __getitem__(self, label: str) -> float:
        for name, value in self.items:
            if name == label:
                return value
        if label in LABELS:
            return 0.0
        raise KeyError(label)

    @property
    def credits(self) -> float:
        """Sum of policy revenues (a non-positive number)."""
        return math.fsum(v for k, v in self.items if k in CREDIT_LABELS)

    @property
    def gross(self) -> float:
        """Cost before policy revenues."""
        return math.fsum(v for k, v in self.items if k not in CREDIT_LABELS)

    def as_dict(self) -> dict[str, float]:
        return dict(self.items)


@dataclass(frozen=True)
class MitigationResult:
    """Levelized subsidy per tonne of CO2e avoided against the fossil benchmark."""

    pathway: str
    lscm: float
    total_subsidy: float
    ci_delta: float
    unit: str
    components: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "components", MappingProxyType(dict(self.components)))
        if self.ci_delta <= 0:
            raise NoMitigation(f"{self.pathway}: CI delta {self.ci_delta:.4f} is not positive")

    @property
    def applicable(self) -> bool:
        """False when the pathway receives no modeled incentive at all."""
        return any(v != 0 for v in self.components.values())


@dataclass(frozen=True)
class CO2Sale:
    """Sell part of the captured biogenic CO2 instead of storing it.

    ``avoided`` says which handling costs the sold share no longer pays.
    The buyer is assumed to keep the CO2 out of the atmosphere, so the
    hydrogen keeps its CI (and its 45V tier); 45Q is only earned on the
    stored remainder.
    """

    price: float
    fraction: float = 0.95
    avoided: str = "none"

    def __post_init__(self):
        if not 0 <= self.fraction <= 1:
            raise ValueError("sold fraction must lie in [0, 1]")
        if self.avoided not in AVOIDED_COST_CONVENTIONS:
            raise ValueError(f"avoided must be one of {AVOIDED_COST_CONVENTIONS}")


@dataclass
class _Eval:
    """Per-GJ_HHV costs and policy revenue of one facility or chain.

    ``revenues`` are shown as credit items; ``embedded`` are already folded
    into an input price (methane fee, 45Y, DAC 45Q).
    """

    terms: dict[str, float] = field(default_factory=dict)
    revenues: dict[str, float] = field(default_factory=dict)
    embedded: dict[str, float] = field(default_factory=dict)
    selected: tuple[str, ...] = ()
    options: dict[str, float] = field(default_factory=dict)

    def add(self, label: str, value: float) -> None:
        self.terms[label] = self.terms.get(label, 0.0) + value

    def earn(self, instrument: str, value: float) -> None:
        self.revenues[instrument] = self.revenues.get(instrument, 0.0) + value

    def embed(self, instrument: str, value: float) -> None:
        self.embedded[instrument] = self.embedded.get(instrument, 0.0) + value

    def incentives(self) -> dict[str, float]:
        out = dict(self.embedded)
        for k, v in self.revenues.items():
            out[k] = out.get(k, 0.0) + v
        return dict(sorted(out.items()))


def _plant_terms(tech: TechnologySpec, fin: FinancialParams) -> tuple[float, float, float]:
    cf = tech.capacity_factor
    if cf <= 0:
        raise ZeroCapacityFactor(f"{tech.key}: capacity factor must be positive")
    gj_per_kw_year = HOURS_PER_YEAR * cf * GJ_PER_KWH
    return tech.capex * fin.crf / gj_per_kw_year, tech.fom / gj_per_kw_year, tech.vom


def annualized_unit_cost(tech: TechnologySpec, fin: FinancialParams) -> float:
    """Capital, fixed and variable O&M of a plant in $/GJ of output."""
    return math.fsum(_plant_terms(tech, fin))


def feed_price(feed: Feedstock, policy: PolicySuite, fin: FinancialParams) -> tuple[float, dict[str, float]]:
    """Effective $/GJ price of an energy input and the policy terms folded into it.

    The methane fee raises natural gas prices; 45Y lowers the price of
    clean electricity.  Returned terms are revenues per GJ of input, so the
    fee appears negative.
    """
    price = feed.price_per_gj
    embedded = {}
    if feed.methane_leak:
        fee = methane_fee_per_gj(feed.methane_leak, policy.methane_fee) * fin.df(policy.durations["methane_fee"])
        price += fee
        embedded["methane_fee"] = -fee
    if feed.credit_45y:
        rate = Quantity.of(policy.y45_rate, "USD/MWh").magnitude("USD/GJ")
        net = net_input_price_45y(price, rate, fin.df(policy.durations["45Y"]))
        embedded["45Y"] = price - net
        price = net
    return price, embedded


def _service_rate(ds: Dataset, *keys: str) -> float:
    return math.fsum(ds.feedstocks[k].price_per_t for k in keys)


def _grid_price(ds: Dataset) -> float:
    return ds.feedstocks["grid_electricity"].price_per_gj


def _eval_h2(ds: Dataset, fac: Facility, policy: PolicySuite, fin: FinancialParams,
             dual_credit: bool = False, co2_sale: CO2Sale | None = None) -> tuple[_Eval, float]:
    tech, feed = fac.technology, fac.feedstock
    ev = _Eval()
    capital, fom, vom = _plant_terms(tech, fin)
    ev.add("capital", capital)
    ev.add("fom", fom)
    ev.add("vom", vom)
    price, embedded = feed_price(feed, policy, fin)
    ev.add("feedstock", tech.ifi * price)
    for k, v in embedded.items():
        ev.embed(k, tech.ifi * v)
    ev.add("coproduct_electricity", tech.coproduct_elec * _grid_price(ds))

    ledger = facility_ledger(fac)
    captured = (ledger.sequestered_fossil + ledger.sequestered_neutral) / 1000.0
    sold = co2_sale.fraction * captured if co2_sale else 0.0
    stored = captured - sold
    ts = captured * _service_rate(ds, "co2_transport", "co2_storage")
    if co2_sale:
        avoided = {"none": (), "storage": ("co2_storage",), "transport_storage": ("co2_transport", "co2_storage")}
        ts -= sold * _service_rate(ds, *avoided[co2_sale.avoided])
        ev.add(SALE_LABEL, -sold * co2_sale.price)
    ev.add("co2_transport_storage", ts)

    gj_per_kg = ds.constants.h2_gj_per_kg
    ci = ledger.ghg * gj_per_kg
    if "45V" in fac.credits:
        ev.options["45V"] = policy.credit_45v(ci) * fin.df(policy.durations["45V"]) / gj_per_kg
    if "45Q" in fac.credits:
        ev.options["45Q"] = policy.credit_45q(fac.q45_variant, stored) * fin.df(policy.durations["45Q"])
    ev.selected = _select(ev.options, stack=dual_credit or fac.select == "all")
    for k in ev.selected:
        ev.earn(k, ev.options[k])
    return ev, ci


def _select(options: Mapping[str, float], stack: bool) -> tuple[str, ...]:
    positive = [k for k in sorted(options) if options[k] > 0]
    if stack or len(positive) <= 1:
        return tuple(positive)
    return (max(positive, key=lambda k: options[k]),)


def _check_claims(chain: PathwayChain) -> None:
    rfs = rfs_problems(chain)
    if rfs:
        raise IneligibleRfsCategory("; ".join(rfs))
    problems = validate_claims(chain)
    if problems:
        raise ClaimViolation("; ".join(problems))


def _resolve(ds: Dataset, pathway: PathwayChain | str) -> PathwayChain:
    return ds.pathway(pathway) if isinstance(pathway, str) else pathway


_CREDIT_ITEM = {"45V": "credit_45v", "45Q": "credit_45q"}


def lcof_h2(ds: Dataset, pathway: PathwayChain | str, policy: PolicySuite | None = None,
            fin: FinancialParams | None = None, *, dual_credit: bool = False,
            co2_sale: CO2Sale | None = None) -> LcofBreakdown:
    """Net cost of hydrogen in $/kg.

    The facility takes the larger of its derated 45Q and 45V revenues.
    ``dual_credit`` stacks both, which the rules do not allow; it exists
    for what-if comparisons only.
    """
    chain = _resolve(ds, pathway)
    if chain.product != "h2":
        raise NotHydrogenPathway(f"{chain.id} makes {chain.product}")
    _check_claims(chain)
    policy = policy or ds.policy
    fin = fin or ds.finance
    ev, ci = _eval_h2(ds, chain.main_facility, policy, fin, dual_credit, co2_sale)
    k = ds.constants.h2_gj_per_kg
    items = [(label, ev.terms.get(label, 0.0) * k) for label in COST_LABELS]
    if SALE_LABEL in ev.terms:
        items.append((SALE_LABEL, ev.terms[SALE_LABEL] * k))
    items += [(label, -ev.revenues.get(inst, 0.0) * k) for inst, label in _CREDIT_ITEM.items()]
    items += [(label, 0.0) for label in ("credit_45z", "rfs", "lcfs")]
    what_if = tuple(n for n, on in (("dual_credit", dual_credit), ("co2_sale", co2_sale is not None)) if on)
    return LcofBreakdown(chain.id, "USD/kg", tuple(items), ci, "kgCO2e/kg", ev.selected,
                         {i: v * k for i, v in ev.options.items()}, what_if)


def slf_gj_per_gal(ds: Dataset) -> float:
    """GJ_HHV in one gallon of synthetic fuel."""
    return Quantity.of(ds.constants.slf_gal_lhv_mmbtu, "MMBtu_LHV/gal").magnitude("GJ_HHV/gal", ds.fuels["slf"])


def _eval_slf(ds: Dataset, chain: PathwayChain, policy: PolicySuite, fin: FinancialParams,
              dual_credit: bool) -> _Eval:
    """Per-GJ plant, feed and CO2 costs of a liquid-fuel chain, before fuel credits."""
    main = chain.main_facility
    tech = main.technology
    ev = _Eval()
    capital, fom, vom = _plant_terms(tech, fin)
    ev.add("capital", capital)
    ev.add("fom", fom)
    ev.add("vom", vom)
    ts_rate = _service_rate(ds, "co2_transport", "co2_storage")
    if main.fed_by_hydrogen:
        h2, _ = _eval_h2(ds, chain.h2_facility, policy, fin, dual_credit)
        # Hydrogen is bought at its gross cost; its credits pass through.
        ev.add("feedstock", tech.ifi * math.fsum(h2.terms.values()))
        for inst, value in h2.revenues.items():
            ev.earn(inst, tech.ifi * value)
        for inst, value in h2.embedded.items():
            ev.embed(inst, tech.ifi * value)
        ev.selected = h2.selected
        if chain.co2_source == "DAC":
            supplier = chain.co2_facility
            price = supplier.feedstock.price_per_t
            if "45Q" in supplier.credits:
                credit = policy.q45_rates[supplier.q45_variant] * fin.df(policy.durations["45Q"])
                ev.embed("45Q", tech.co2_demand / 1000.0 * credit)
                price = dac_co2_net_cost(price, policy.q45_rates[supplier.q45_variant], fin.df(policy.durations["45Q"]))
            ev.add("dac_co2_net", tech.co2_demand / 1000.0 * price)
        return ev
    feed = main.feedstock
    price, embedded = feed_price(feed, policy, fin)
    ev.add("feedstock", tech.ifi * price)
    for k, v in embedded.items():
        ev.embed(k, tech.ifi * v)
    available = max(0.0, tech.ifi * feed.carbon_content - ds.fuels["slf"].carbon_content)
    ev.add("co2_transport_storage", tech.capture_rate * available / 1000.0 * ts_rate)
    ev.add("coproduct_electricity", tech.coproduct_elec * _grid_price(ds))
    supplier = chain.co2_facility
    if supplier is not None and supplier.feedstock is feed and feed.fermentation_capture:
        stored = tech.ifi * feed.fermentation_capture / 1000.0
        ev.add("co2_transport_storage", stored * (feed.co2_compression + ts_rate))
        if "45Q" in supplier.credits:
            credit = policy.credit_45q(supplier.q45_variant, stored) * fin.df(policy.durations["45Q"])
            ev.earn("45Q", credit)
            ev.selected = ("45Q",)
    return ev


def lcof_slf(ds: Dataset, pathway: PathwayChain | str, scenario: FuelCreditScenario | None = None,
             policy: PolicySuite | None = None, fin: FinancialParams | None = None, *,
             dual_credit: bool = False) -> LcofBreakdown:
    """Net cost of synthetic liquid fuel in $/gal under a fuel-credit scenario.

    The default scenario grants no 45Z, RIN or LCFS revenue.  Upstream
    hydrogen, DAC and fermentation credits are always passed through.
    """
    chain = _resolve(ds, pathway)
    if chain.product != "slf":
        raise NotSlfPathway(f"{chain.id} makes {chain.product}")
    _check_claims(chain)
    scenario = scenario or FuelCreditScenario()
    policy = policy or ds.policy
    fin = fin or ds.finance
    scenario.check(fin.book_life_years)
    ev = _eval_slf(ds, chain, policy, fin, dual_credit)
    gal = slf_gj_per_gal(ds)
    ci = slf_ci(ds, chain)

    items = [(label, ev.terms.get(label, 0.0) * gal) for label in COST_LABELS]
    items += [(label, -ev.revenues.get(inst, 0.0) * gal) for inst, label in _CREDIT_ITEM.items()]
    options = {i: v * gal for i, v in ev.revenues.items() if i in _CREDIT_ITEM}
    selected = ev.selected

    z45 = 0.0
    if "45Z" in chain.main_facility.credits:
        z45 = policy.credit_45z_per_gal(ci) * fin.df(scenario.z45_duration_years)
        options["45Z"] = z45
        if z45 > 0:
            selected = selected + ("45Z",)
    items.append(("credit_45z", -z45))

    rfs = 0.0
    if chain.rfs_category != "none":
        rfs = rfs_credit_per_gal(scenario.rin_prices[chain.rfs_category], policy.rin_equivalence)
    items.append(("rfs", -rfs))

    ci_gj_lhv = Quantity.of(ci, "kgCO2e/MMBtu_LHV").magnitude("kgCO2e/GJ_LHV")
    lcfs = lcfs_credit_per_gal(ci_gj_lhv, scenario.lcfs_benchmark, scenario.lcfs_price, ds.constants.slf_gal_lhv)
    if lcfs < 0:
        warnings.warn(f"{chain.id} is above the LCFS benchmark; its deficit is not charged", stacklevel=2)
        lcfs = 0.0
    items.append(("lcfs", -lcfs))
    what_if = ("dual_credit",) if dual_credit else ()
    return LcofBreakdown(chain.id, "USD/gal", tuple(items), ci, "kgCO2e/MMBtu_LHV", selected, options, what_if)


def lcof(ds: Dataset, pathway: PathwayChain | str, scenario: FuelCreditScenario | None = None,
         **kwargs) -> LcofBreakdown:
    """Dispatch to the hydrogen or liquid-fuel engine."""
    chain = _resolve(ds, pathway)
    if chain.product == "h2":
        return lcof_h2(ds, chain, **kwargs)
    return lcof_slf(ds, chain, scenario, **kwargs)


def policy_components(ds: Dataset, pathway: PathwayChain | str, z45_years: int | None = None,
                      dual_credit: bool = False, policy: PolicySuite | None = None,
                      fin: FinancialParams | None = None) -> dict[str, float]:
    """Derated incentive value per unit product by instrument; the methane fee is negative.

    RIN and LCFS revenues are market credits and are left out.  45Z runs
    for the full book life unless ``z45_years`` says otherwise.
    """
    chain = _resolve(ds, pathway)
    _check_claims(chain)
    policy = policy or ds.policy
    fin = fin or ds.finance
    if chain.product == "h2":
        ev, _ = _eval_h2(ds, chain.main_facility, policy, fin, dual_credit)
        k = ds.constants.h2_gj_per_kg
        return {i: v * k for i, v in ev.incentives().items()}
    ev = _eval_slf(ds, chain, policy, fin, dual_credit)
    gal = slf_gj_per_gal(ds)
    out = {i: v * gal for i, v in ev.incentives().items()}
    if "45Z" in chain.main_facility.credits:
        years = fin.book_life_years if z45_years is None else z45_years
        out["45Z"] = policy.credit_45z_per_gal(slf_ci(ds, chain)) * fin.df(years)
    return out


def ci_per_unit(ds: Dataset, chain: PathwayChain) -> float:
    """CI in kg per kg H2 or per gallon of liquid fuel."""
    if chain.product == "h2":
        return lcof_h2(ds, chain).ci
    return slf_ci(ds, chain) * ds.constants.slf_gal_lhv_mmbtu


def lscm(ds: Dataset, pathway: PathwayChain | str, benchmarks: CIBenchmarks | None = None, *,
         z45_years: int | None = None, dual_credit: bool = False) -> MitigationResult:
    """Total derated incentive divided by CO2e avoided, $/t."""
    chain = _resolve(ds, pathway)
    benchmarks = benchmarks or ds.benchmarks
    components = policy_components(ds, chain, z45_years, dual_credit)
    total = math.fsum(components.values())
    if chain.product == "h2":
        fossil, unit = benchmarks.h2_fossil, "USD/kg"
    else:
        fossil, unit = benchmarks.slf_fossil_per_gal, "USD/gal"
    delta = fossil - ci_per_unit(ds, chain)
    if delta <= 0:
        raise NoMitigation(f"{chain.id} emits {-delta:.3f} kg more than the fossil benchmark per unit")
    return MitigationResult(chain.id, total / delta * 1000.0, total, delta, unit, components)


def subsidy_point(ds: Dataset, pathway: PathwayChain | str, reference_ci: float,
                  include_45y: bool = False) -> tuple[float, float]:
    """(CI reduction kg/kg, subsidy $/kg) of a hydrogen pathway against a reference CI.

    45Y is paid to the power generator rather than the hydrogen producer
    and is left out unless asked for.
    """
    chain = _resolve(ds, pathway)
    if chain.product != "h2":
        raise NotHydrogenPathway(f"{chain.id} makes {chain.product}")
    components = policy_components(ds, chain)
    if not include_45y:
        components.pop("45Y", None)
    return reference_ci - lcof_h2(ds, chain).ci, math.fsum(components.values())
