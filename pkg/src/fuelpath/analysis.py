"""Sensitivity sweeps, competitiveness frontiers, subsidy regression and breakeven solvers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import bisect

from fuelpath.emissions import biomass_slf_ci, slf_energy_per_tonne
from fuelpath.errors import DegeneratePoints, InvalidYears, NoCrossing
from fuelpath.lcof import CO2Sale, lcof_h2, lcof_slf, subsidy_point
from fuelpath.policy import FuelCreditScenario
from fuelpath.techdata.dataset import Dataset

FOSSIL = "FOSSIL"
DEFAULT_RIN_SCENARIOS = ((0.75, 1.25), (0.75, 2.25), (1.5, 2.0), (1.5, 3.0))
DEFAULT_LCFS_PRICES = tuple(range(0, 201, 5))


def rin_prices(d5: float, d3: float) -> dict[str, float]:
    """RIN prices for a (D5, D3) pair; D6 trades at the D5 price."""
    return {"D3": d3, "D5": d5, "D6": d5}


def _durations(ds: Dataset, durations: Iterable[int] | None) -> tuple[int, ...]:
    life = ds.finance.book_life_years
    out = tuple(range(life + 1)) if durations is None else tuple(durations)
    for d in out:
        if not 0 <= d <= life:
            raise InvalidYears(f"45Z duration {d} outside [0, {life}]")
    return out


@dataclass(frozen=True)
class DurationSweep:
    """Net LCOF ($/gal) of each pathway as the 45Z term grows."""

    durations: tuple[int, ...]
    curves: Mapping[str, tuple[float, ...]]

    def min_duration(self, pathway: str, ceiling: float) -> int | None:
        """Shortest swept duration at which the pathway costs at most ``ceiling``."""
        for d, value in zip(self.durations, self.curves[pathway]):
            if value <= ceiling:
                return d
        return None


def sweep_45z_duration(ds: Dataset, pathways: Sequence[str] | None = None,
                       durations: Iterable[int] | None = None, lcfs_price: float = 0.0,
                       rin: Mapping[str, float] | None = None) -> DurationSweep:
    """LCOF against 45Z duration with all other fuel credits held fixed."""
    pathways = list(pathways or ds.pathway_ids("slf"))
    durs = _durations(ds, durations)
    curves = {}
    for pid in pathways:
        curves[pid] = tuple(
            lcof_slf(ds, pid, FuelCreditScenario(d, lcfs_price, rin or {})).net for d in durs
        )
    return DurationSweep(durs, MappingProxyType(curves))


def min_duration_in_band(ds: Dataset, pathway: str, ceiling: float | None = None) -> int | None:
    """Shortest 45Z term that brings a pathway under the jet-price ceiling (90th percentile by default)."""
    ceiling = ds.jet_price["p90"] if ceiling is None else ceiling
    return sweep_45z_duration(ds, [pathway]).min_duration(pathway, ceiling)


@dataclass(frozen=True)
class Cell:
    winner: str
    lcof_by_pathway: Mapping[str, float]


@dataclass(frozen=True)
class SweepGrid:
    """Winner of every (RIN pair, 45Z duration, LCFS price) cell."""

    durations: tuple[int, ...]
    lcfs_prices: tuple[float, ...]
    rin_scenarios: tuple[tuple[float, float], ...]
    fossil_price: float
    pathways: tuple[str, ...]
    cells: Mapping[tuple[float, float, int, float], Cell] = field(repr=False)

    def winner(self, d5: float, d3: float, duration: int, lcfs: float) -> str:
        return self.cells[(d5, d3, duration, lcfs)].winner

    def panel(self, d5: float, d3: float) -> list[list[str]]:
        """Winner matrix with one row per duration and one column per LCFS price."""
        return [[self.winner(d5, d3, d, p) for p in self.lcfs_prices] for d in self.durations]

    def winners(self) -> set[str]:
        return {c.winner for c in self.cells.values()}


def pick_winner(fossil_price: float, lcofs: Mapping[str, float], order: Sequence[str]) -> str:
    """Cheapest option; exact ties go to fossil, then to the earliest pathway."""
    best, best_value = FOSSIL, fossil_price
    for pid in order:
        if lcofs[pid] < best_value:
            best, best_value = pid, lcofs[pid]
    return best


def competitiveness_frontier(ds: Dataset, fossil_price: float | None = None,
                             durations: Iterable[int] | None = None,
                             lcfs_prices: Iterable[float] = DEFAULT_LCFS_PRICES,
                             rin_scenarios: Iterable[tuple[float, float]] = DEFAULT_RIN_SCENARIOS,
                             pathways: Sequence[str] | None = None) -> SweepGrid:
    """Evaluate every liquid-fuel pathway on the grid and record the cheapest option."""
    fossil_price = ds.jet_price["median"] if fossil_price is None else fossil_price
    if fossil_price <= 0:
        raise ValueError("fossil price must be positive")
    order = tuple(sorted(pathways or ds.pathway_ids("slf"), key=lambda p: ds.pathway(p).index))
    durs = _durations(ds, durations)
    prices = tuple(lcfs_prices)
    rins = tuple((float(a), float(b)) for a, b in rin_scenarios)
    cells = {}
    for d5, d3 in rins:
        for d in durs:
            for price in prices:
                scenario = FuelCreditScenario(d, price, rin_prices(d5, d3))
                lcofs = {pid: lcof_slf(ds, pid, scenario).net for pid in order}
                cells[(d5, d3, d, price)] = Cell(pick_winner(fossil_price, lcofs, order), MappingProxyType(lcofs))
    return SweepGrid(durs, prices, rins, fossil_price, order, MappingProxyType(cells))


@dataclass(frozen=True)
class SubsidyLine:
    slope: float  # $/t CO2e
    intercept: float  # $/kg


def fit_subsidy_line(points: Sequence[tuple[float, float]]) -> SubsidyLine:
    """Least-squares line through (CI reduction kg/kg, subsidy $/kg) points."""
    if len(points) < 2:
        raise DegeneratePoints("need at least two points")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if np.ptp(x) == 0:
        raise DegeneratePoints("all points share the same CI reduction")
    slope, intercept = np.polyfit(x, y, 1)
    return SubsidyLine(float(slope) * 1000.0, float(intercept))


@dataclass(frozen=True)
class SubsidyRegression:
    line: SubsidyLine
    points: Mapping[str, tuple[float, float]]
    reference_ci: float
    electrolysis_total: float
    electrolysis_bonus: float


def subsidy_regression(ds: Dataset, fit: Sequence[str] = ("P1", "P2", "P3"),
                       target: str = "P4", reference: str = "P1") -> SubsidyRegression:
    """Fit reforming subsidies against CI reduction and compare electrolysis to the line.

    CI reductions are measured from the unabated reference pathway.  The
    bonus is the target's subsidy per tonne above the fitted slope.
    """
    ref_ci = lcof_h2(ds, reference).ci
    points = {pid: subsidy_point(ds, pid, ref_ci) for pid in (*fit, target)}
    line = fit_subsidy_line([points[p] for p in fit])
    dci, subsidy = points[target]
    total = subsidy / dci * 1000.0
    return SubsidyRegression(line, MappingProxyType(points), ref_ci, total, total - line.slope)


def _sale_gap(ds: Dataset, price: float, pathway: str, target_net: float, fraction: float, avoided: str) -> float:
    return lcof_h2(ds, pathway, co2_sale=CO2Sale(price, fraction, avoided)).net - target_net


def breakeven_biogenic_co2_price(ds: Dataset, pathway: str = "P6", reference: str = "P1",
                                 fraction: float = 0.95, avoided: str = "none",
                                 xtol: float = 0.01, max_price: float = 1e5) -> float:
    """CO2 sale price ($/t) that brings ``pathway`` down to the reference LCOF.

    ``avoided`` picks the handling costs the sold CO2 no longer pays:
    "none", "storage" or "transport_storage".
    """
    target = lcof_h2(ds, reference).net
    base = lcof_h2(ds, pathway).net
    if base <= target:
        raise NoCrossing(f"{pathway} already costs no more than {reference}")
    gap = lambda p: _sale_gap(ds, p, pathway, target, fraction, avoided)  # noqa: E731
    lo = 0.0
    if gap(lo) <= 0:
        return lo
    hi = 1.0
    while gap(hi) > 0:
        hi *= 2
        if hi > max_price:
            raise NoCrossing(f"no sale price below {max_price} $/t closes the gap")
    return float(bisect(gap, lo, hi, xtol=xtol))


def breakeven_all_conventions(ds: Dataset, **kwargs) -> dict[str, float]:
    return {a: breakeven_biogenic_co2_price(ds, avoided=a, **kwargs) for a in ("none", "storage", "transport_storage")}


@dataclass(frozen=True)
class EfficiencyStudy:
    """Inputs of the per-tonne biomass value study (dollars per tonne of biomass)."""

    biomass_mmbtu: float = 18.8
    carbon_fraction: float = 0.475
    product_carbon: float = 71.0  # kg CO2 per MMBtu of fuel
    capture: float = 0.87
    gal_per_mmbtu: float = 7.9
    z45_rate: float = 1.62  # $/gal at CI 0
    z45_pivot: float = 50.0
    fuel_price: float = 2.2  # $/gal
    biomass_cost: float = 121.0
    fixed_base: float = 218.0
    vom: float = 5.43  # $/MMBtu
    ts_cost: float = 28.0  # $/t CO2
    lhv_factor: bool = True

    @classmethod
    def from_dataset(cls, ds: Dataset, **overrides) -> "EfficiencyStudy":
        bio = ds.feedstocks["biomass"]
        values = dict(
            fuel_price=ds.jet_price["median"],
            biomass_cost=round(bio.price_per_gj * bio.hhv_per_tonne),
            z45_pivot=ds.policy.z45_ci_pivot,
            ts_cost=ds.feedstocks["co2_transport"].price_per_t + ds.feedstocks["co2_storage"].price_per_t,
        )
        values.update(overrides)
        return cls(**values)


@dataclass(frozen=True)
class EfficiencyCase:
    eta: float
    n_pct: float
    ci: float
    credit_45z: float
    revenue_slf: float
    biomass: float
    fixed: float
    vom: float
    co2_ts: float

    @property
    def net_value(self) -> float:
        return self.credit_45z + self.revenue_slf - self.biomass - self.fixed - self.vom - self.co2_ts

    @property
    def components(self) -> dict[str, float]:
        return {"credit_45z": self.credit_45z, "revenue_slf": self.revenue_slf, "biomass": self.biomass,
                "fixed": self.fixed, "vom": self.vom, "co2_ts": self.co2_ts}


def efficiency_case(eta: float, n_pct: float, study: EfficiencyStudy = EfficiencyStudy()) -> EfficiencyCase:
    """Net value of one tonne of biomass converted at efficiency ``eta``.

    Fixed cost falls by ``n_pct`` for every 10 points of efficiency given up.
    """
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    if n_pct < 0:
        raise ValueError("n_pct must be non-negative")
    s = study
    energy = slf_energy_per_tonne(eta, s.lhv_factor, s.biomass_mmbtu)
    ci = biomass_slf_ci(eta, s.lhv_factor, s.biomass_mmbtu, s.carbon_fraction, s.product_carbon, s.capture)
    gallons = energy * s.gal_per_mmbtu
    biomass_co2 = 1000.0 * s.carbon_fraction * 44.0 / 12.0
    captured = abs(biomass_co2 - energy * s.product_carbon) * s.capture / 1000.0
    return EfficiencyCase(
        eta=eta,
        n_pct=n_pct,
        ci=ci,
        credit_45z=gallons * max(0.0, (s.z45_pivot - ci) / s.z45_pivot) * s.z45_rate,
        revenue_slf=gallons * s.fuel_price,
        biomass=s.biomass_cost,
        fixed=((eta - 0.5) * n_pct / 0.1 + 1.0) * s.fixed_base,
        vom=energy * s.vom,
        co2_ts=captured * s.ts_cost,
    )


def efficiency_incentive_analysis(etas: Iterable[float] = (0.5, 0.4, 0.3, 0.2), n_pct: float = 0.095,
                                  study: EfficiencyStudy = EfficiencyStudy()) -> list[EfficiencyCase]:
    return [efficiency_case(e, n_pct, study) for e in etas]


def net_value_spread(cases: Sequence[EfficiencyCase]) -> float:
    """(max - min) net value as a fraction of the first case's net value."""
    nets = [c.net_value for c in cases]
    return (max(nets) - min(nets)) / abs(nets[0])


def required_fixed_cost_reduction(eta: float = 0.2, reference_eta: float = 0.5,
                                  study: EfficiencyStudy = EfficiencyStudy()) -> float:
    """Fractional cut in fixed cost at ``eta`` needed to match the reference net value."""
    base = efficiency_case(reference_eta, 0.0, study).net_value
    case = efficiency_case(eta, 0.0, study)
    before_fixed = case.net_value + case.fixed
    return 1.0 - (before_fixed - base) / study.fixed_base


def with_scaled_service_cost(ds: Dataset, factor: float, keys: Sequence[str] = ("co2_transport", "co2_storage")) -> Dataset:
    """Copy of the dataset with CO2 handling prices multiplied by ``factor``."""
    feeds = dict(ds.feedstocks)
    for k in keys:
        feeds[k] = replace(feeds[k], price=feeds[k].price * factor)
    return replace(ds, feedstocks=MappingProxyType(feeds))


def is_monotone_non_increasing(values: Sequence[float], tol: float = 1e-12) -> bool:
    return all(b <= a + tol for a, b in zip(values, values[1:]))


def mean_slope(values: Sequence[float]) -> float:
    """Average change per step of a curve."""
    if len(values) < 2:
        return math.nan
    return (values[-1] - values[0]) / (len(values) - 1)
