"""Acceptance checks shared by ``fuelpath verify`` and the test suite.

Each criterion returns a list of named checks with the observed value, the
target and whether it passed.  Tolerances are fixed here and never relaxed
to make a check pass.
"""

from __future__ import annotations

import filecmp
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from fuelpath import analysis
from fuelpath.emissions import pathway_ledger
from fuelpath.finance import derating_factor
from fuelpath.lcof import feed_price, lcof_h2, lcof_slf, lscm
from fuelpath.policy import FuelCreditScenario, validate_claims
from fuelpath.techdata.dataset import Dataset
from fuelpath.techdata.derivations import (
    check_dataset,
    derive_compression_cost,
    derive_ethanol_to_jet_params,
    derive_integrated_costs,
)


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    observed: object
    expected: str
    passed: bool

    def line(self) -> str:
        obs = f"{self.observed:.4f}" if isinstance(self.observed, float) else str(self.observed)
        return f"[{'PASS' if self.passed else 'FAIL'}] C{self.criterion} {self.name}: {obs} (want {self.expected})"


def _near(c: int, name: str, observed: float, target: float, tol: float) -> Check:
    return Check(c, name, observed, f"{target} +/- {tol}", abs(observed - target) <= tol)


def _within(c: int, name: str, observed: float, low: float, high: float) -> Check:
    return Check(c, name, observed, f"in [{low}, {high}]", low <= observed <= high)


def brute_force_df(wacc: float, m: int, n: int) -> float:
    """Derating factor from explicit discounted sums, independent of the closed form."""
    pv = lambda years: sum((1 + wacc) ** -t for t in range(1, years + 1))  # noqa: E731
    return pv(m) / pv(n)


def criterion_1(ds: Dataset) -> list[Check]:
    out = []
    for m, target in ((10, 0.808), (12, 0.896)):
        df = derating_factor(0.1, m, 15)
        out.append(_near(1, f"DF(0.1,{m},15)", df, target, 0.005))
        oracle = brute_force_df(0.1, m, 15)
        out.append(Check(1, f"DF(0.1,{m},15) vs annuity sum", abs(df - oracle), "< 1e-12", abs(df - oracle) < 1e-12))
    return out


H2_TARGETS = {"P1": 1.29, "P2": 1.24, "P3": 1.16, "P4": 0.31, "P5": 3.09, "P6": 2.22}


def criterion_2(ds: Dataset) -> list[Check]:
    out = [_near(2, f"{p} LCOF $/kg", lcof_h2(ds, p).net, t, 0.07) for p, t in H2_TARGETS.items()]
    out.append(_near(2, "P6 dual-credit LCOF $/kg", lcof_h2(ds, "P6", dual_credit=True).net, 0.84, 0.15))
    return out


def criterion_3(ds: Dataset) -> list[Check]:
    out = [
        _near(3, "P2 CI kg/kg", lcof_h2(ds, "P2").ci, 3.3, 0.2),
        _near(3, "P3 CI kg/kg", lcof_h2(ds, "P3").ci, 2.9, 0.2),
        _near(3, "P5 CI kg/kg", lcof_h2(ds, "P5").ci, 1.3, 0.1),
        _near(3, "P1 CI kg/kg", lcof_h2(ds, "P1").ci, 11.0, 0.3),
    ]
    worst = max(abs(pathway_ledger(ds, c).residual) for c in ds.pathways.values())
    out.append(Check(3, "carbon ledger residual (max over pathways)", worst, "<= 1e-9", worst <= 1e-9))
    return out


SLF_TARGETS = {"P9": (2.9, 0.15), "P7": (4.3, 0.2), "P8": (4.2, 0.2), "P14": (3.8, 0.2), "P15": (3.6, 0.2)}


def criterion_4(ds: Dataset) -> list[Check]:
    out = [_near(4, f"{p} LCOF $/gal", lcof_slf(ds, p).net, t, tol) for p, (t, tol) in SLF_TARGETS.items()]
    out += [_within(4, f"{p} LCOF $/gal", lcof_slf(ds, p).net, 4.2, 6.0) for p in ("P10", "P11", "P12", "P13")]
    return out


def criterion_5(ds: Dataset) -> list[Check]:
    sweep = analysis.sweep_45z_duration(ds, ["P11", "P13"])
    ceiling = ds.jet_price["p90"]
    return [
        Check(5, "P11 minimum 45Z years", sweep.min_duration("P11", ceiling), "2", sweep.min_duration("P11", ceiling) == 2),
        Check(5, "P13 minimum 45Z years", sweep.min_duration("P13", ceiling), "5", sweep.min_duration("P13", ceiling) == 5),
    ]


def _region(grid, d5, d3, pred) -> list[str]:
    return [grid.winner(d5, d3, d, p) for d in grid.durations for p in grid.lcfs_prices if pred(d, p)]


def _region_check(c, name, winners, expected) -> Check:
    bad = sorted({w for w in winners if w != expected})
    misses = sum(w != expected for w in winners)
    observed = f"{len(winners) - misses}/{len(winners)} cells" + (f", others: {','.join(bad)}" if bad else "")
    return Check(c, name, observed, f"all {expected}", bool(winners) and misses == 0)


def criterion_6(ds: Dataset, grid: analysis.SweepGrid | None = None) -> list[Check]:
    grid = grid or analysis.competitiveness_frontier(ds)
    lo = (0.75, 1.25)
    hi = (1.5, 3.0)
    allowed = {analysis.FOSSIL, "P11", "P12", "P13", "P15"}
    winners = grid.winners()
    return [
        _region_check(6, "(0.75,1.25) lcfs<25, dur<2", _region(grid, *lo, lambda d, p: d < 2 and p < 25), analysis.FOSSIL),
        _region_check(6, "(0.75,1.25) lcfs 25-75, dur<2", _region(grid, *lo, lambda d, p: d < 2 and 25 <= p <= 75), "P15"),
        _region_check(6, "(0.75,1.25) dur>=8, lcfs>=100", _region(grid, *lo, lambda d, p: d >= 8 and p >= 100), "P11"),
        _region_check(6, "(1.5,3) dur=0, lcfs=0", _region(grid, *hi, lambda d, p: d == 0 and p == 0), "P12"),
        _region_check(6, "(1.5,3) outside dur<2 and lcfs<50", _region(grid, *hi, lambda d, p: not (d < 2 and p < 50)), "P13"),
        Check(6, "winner set over all panels", ",".join(sorted(winners)), "subset of FOSSIL,P11,P12,P13,P15",
              winners <= allowed),
    ]


def criterion_7(ds: Dataset) -> list[Check]:
    reg = analysis.subsidy_regression(ds)
    return [
        _near(7, "P1-P3 slope $/t", reg.line.slope, 76, 5),
        _near(7, "P4 total $/t", reg.electrolysis_total, 217, 10),
        _near(7, "P4 bonus $/t", reg.electrolysis_bonus, 141, 12),
    ]


def criterion_8(ds: Dataset) -> list[Check]:
    low_2030, high_2030 = ds.scc_bands["2030"]
    _, high_2040 = ds.scc_bands["2040"]
    out = []
    for p in ("P2", "P3", "P5", "P6"):
        value = lscm(ds, p).lscm
        out.append(Check(8, f"{p} LSCM below {low_2030}", value, f"< {low_2030}", value < low_2030))
    p4 = lscm(ds, "P4").lscm
    out.append(_within(8, "P4 LSCM", p4, low_2030, high_2030))
    p9 = lscm(ds, "P9").lscm
    out.append(Check(8, f"P9 LSCM above {high_2040}", p9, f"> {high_2040}", p9 > high_2040))
    dual = lscm(ds, "P6", dual_credit=True).lscm
    out.append(_near(8, "P6 dual-credit LSCM", dual, 130, 15))
    out.append(Check(8, "P6 dual-credit LSCM below 140", dual, "< 140", dual < 140))
    return out


def criterion_9(ds: Dataset) -> list[Check]:
    study = analysis.EfficiencyStudy.from_dataset(ds)
    cases = analysis.efficiency_incentive_analysis(n_pct=0.095, study=study)
    spread = analysis.net_value_spread(cases)
    need = analysis.required_fixed_cost_reduction(0.2, 0.5, study)
    return [
        Check(9, "net value spread (n=9.5%)", spread, "<= 0.05", spread <= 0.05),
        Check(9, "biomass $/t", cases[0].biomass, "121 exactly", cases[0].biomass == 121),
        Check(9, "fixed cost at eta=0.5", cases[0].fixed, "218 exactly", cases[0].fixed == 218),
        Check(9, "required fixed-cost cut at eta=0.2", need, ">= 0.30", need >= 0.30),
    ]


def criterion_10(ds: Dataset) -> list[Check]:
    techs = ds.technologies
    plain = derive_integrated_costs(techs["bg_h2"], techs["rwgs_fts"])
    ccs = derive_integrated_costs(techs["bgccs_h2"], techs["rwgs_fts"])
    etj = derive_ethanol_to_jet_params()
    fin, policy = ds.finance, ds.policy
    _, gas = feed_price(ds.feedstocks["natural_gas"], policy, fin)
    renew, _ = feed_price(ds.feedstocks["renewable_electricity"], policy, fin)
    dac = ds.feedstocks["dac_co2"]
    net_dac = dac.price_per_t - policy.q45_rates[dac.q45_variant] * fin.df(policy.durations["45Q"])
    eth_ci = ds.feedstocks["ethanol_ccs"].upstream_ci
    out = [
        _near(10, "integrated IFI", plain["ifi"], 2.02, 0.01),
        _near(10, "integrated CAPEX $/kW", plain["capex"], 3826, 5),
        _near(10, "integrated CCS CAPEX $/kW", ccs["capex"], 3944, 5),
        _near(10, "ethanol-to-jet CAPEX $/kW", etj.capex_per_kw, 258, 2),
        _near(10, "ethanol-to-jet IFI", etj.ifi, 1.09, 0.005),
        _near(10, "CO2 compression $/t", derive_compression_cost().total, 17, 0.6),
        Check(10, "ethanol-CCS CI kg/GJ", eth_ci, "18 exactly", eth_ci == 18),
        _near(10, "methane fee $/GJ", -gas["methane_fee"], 0.44, 0.01),
        _near(10, "net DAC CO2 $/t", net_dac, 164, 1),
        _near(10, "net renewable electricity $/MWh", renew * 3.6, 21.5, 0.2),
    ]
    for d in check_dataset(ds):
        out.append(Check(10, f"stored {d.name}", d.stored, f"{d.derived:.4f} +/- {d.tolerance}", d.passed))
    return out


def _cli_outputs_identical(ds_path: str | None) -> bool:
    from fuelpath.cli import main

    base = ["--dataset", ds_path] if ds_path else []
    with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
        for out in (a, b):
            for cmd in (["lcof"], ["lscm"], ["sweep", "--lcfs", "50", "--rin-d5", "0.75", "--rin-d3", "1.25"]):
                if main([*cmd, *base, "--out", out]) != 0:
                    return False
        names = sorted(p.name for p in Path(a).iterdir())
        match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
        return bool(names) and not mismatch and not errors


def criterion_11(ds: Dataset, dataset_path: str | None = None) -> list[Check]:
    out = []
    # exclusivity: stacking two exclusive credits on one facility is flagged
    stacked = ds.pathway("P6").with_facility("h2_plant", select="all")
    out.append(Check(11, "stacked 45V+45Q is rejected", len(validate_claims(stacked)), ">= 1",
                     bool(validate_claims(stacked))))
    clean = all(not validate_claims(c) for c in ds.pathways.values())
    out.append(Check(11, "shipped pathways pass claim rules", clean, "True", clean))

    # monotonicity along each subsidy axis
    mono = True
    for pid in ds.pathway_ids("slf"):
        mono &= analysis.is_monotone_non_increasing(
            [lcof_slf(ds, pid, FuelCreditScenario(d)).net for d in range(ds.finance.book_life_years + 1)])
        mono &= analysis.is_monotone_non_increasing(
            [lcof_slf(ds, pid, FuelCreditScenario(0, p)).net for p in range(0, 201, 25)])
        mono &= analysis.is_monotone_non_increasing(
            [lcof_slf(ds, pid, FuelCreditScenario(0, 0, analysis.rin_prices(r, r))).net for r in (0, 0.5, 1, 2, 3)])
    out.append(Check(11, "LCOF non-increasing in 45Z, LCFS and RIN", mono, "True", mono))

    # the chosen credit is worth at least as much as each alternative
    dominant = True
    for pid in ds.pathway_ids("h2"):
        b = lcof_h2(ds, pid)
        taken = -(b["credit_45v"] + b["credit_45q"])
        dominant &= all(taken >= v - 1e-12 for v in b.credit_options.values())
    out.append(Check(11, "max credit selection dominates", dominant, "True", dominant))

    sweep = analysis.sweep_45z_duration(ds, ["P11", "P13"])
    s11, s13 = analysis.mean_slope(sweep.curves["P11"]), analysis.mean_slope(sweep.curves["P13"])
    out.append(Check(11, "P11 falls faster than P13 with 45Z", f"{s11:.4f} vs {s13:.4f}", "P11 steeper", s11 < s13))

    with_credits = all(lcof_slf(ds, a).net < lcof_slf(ds, b).net for a, b in (("P10", "P12"), ("P11", "P13")))
    bare = _without_policy(ds)
    reversed_ = all(lcof_slf(bare, a).net > lcof_slf(bare, b).net for a, b in (("P10", "P12"), ("P11", "P13")))
    out.append(Check(11, "P10/P11 cheaper than P12/P13 with credits", with_credits, "True", with_credits))
    out.append(Check(11, "ordering reverses without credits", reversed_, "True", reversed_))

    same = _cli_outputs_identical(dataset_path)
    out.append(Check(11, "repeated CLI runs are byte-identical", same, "True", same))
    return out


def _without_policy(ds: Dataset) -> Dataset:
    """The dataset with every credit removed and the methane fee set to zero."""
    from dataclasses import replace
    from types import MappingProxyType

    chains = {pid: replace(c, facilities=tuple(replace(f, credits=()) for f in c.facilities), rfs_category="none")
              for pid, c in ds.pathways.items()}
    feeds = {k: replace(f, credit_45y=False, methane_leak=0.0) for k, f in ds.feedstocks.items()}
    return replace(ds, pathways=MappingProxyType(chains), feedstocks=MappingProxyType(feeds))


CRITERIA: dict[int, Callable[..., list[Check]]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11,
}

CRITERIA_TITLES = {
    1: "credit derating factors",
    2: "hydrogen LCOF",
    3: "hydrogen CI and carbon balance",
    4: "liquid-fuel LCOF",
    5: "45Z duration thresholds",
    6: "competitiveness frontiers",
    7: "subsidy regression",
    8: "LSCM against SCC bands",
    9: "efficiency incentive study",
    10: "derived dataset rows",
    11: "policy invariants and reproducibility",
}


def run_acceptance(ds: Dataset, dataset_path: str | None = None, criteria=None) -> list[Check]:
    checks = []
    for n in criteria or sorted(CRITERIA):
        fn = CRITERIA[n]
        checks += fn(ds, dataset_path) if n == 11 else fn(ds)
    return checks


def summarize(checks: list[Check]) -> dict[int, bool]:
    out: dict[int, bool] = {}
    for c in checks:
        out[c.criterion] = out.get(c.criterion, True) and c.passed
    return out


def format_report(checks: list[Check]) -> str:
    lines = [c.line() for c in checks]
    summary = summarize(checks)
    lines.append("")
    lines += [f"criterion {n} ({CRITERIA_TITLES[n]}): {'PASS' if ok else 'FAIL'}" for n, ok in sorted(summary.items())]
    failed = sum(not ok for ok in summary.values())
    lines.append(f"{len(summary) - failed}/{len(summary)} criteria pass")
    return "\n".join(lines)
