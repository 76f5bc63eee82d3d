import math
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuelpath.errors import ClaimViolation, IneligibleRfsCategory, InvariantViolation, NoMitigation, ZeroCapacityFactor
from fuelpath.lcof import (
    LABELS,
    CO2Sale,
    LcofBreakdown,
    annualized_unit_cost,
    lcof,
    lcof_h2,
    lcof_slf,
    lscm,
    policy_components,
    slf_gj_per_gal,
    subsidy_point,
)
from fuelpath.policy import FuelCreditScenario

KG = 0.142
CF_GJ = 8760 * 0.85 * 0.0036  # GJ per kW-year at 85 % capacity factor
DF10 = sum(1.1**-t for t in range(1, 11)) / sum(1.1**-t for t in range(1, 16))
DF12 = sum(1.1**-t for t in range(1, 13)) / sum(1.1**-t for t in range(1, 16))


def oracle_p1():
    capital = 543 * 0.131 / CF_GJ
    fom = 19 / CF_GJ
    feed = 1.23 * (3.88 + 0.29 / 100 * 1500 / 10)
    return (capital + fom + 0.36 + feed) * KG


def oracle_p2():
    captured_t = 1.26 * 50 * 0.912 / 1000
    cost = (943 * 0.131 + 28) / CF_GJ + 1.26 * 4.315 + captured_t * 28 + 0.024 * 55 / 3.6
    q45 = captured_t * 85 * DF12
    return (cost - q45) * KG


def test_p1_hand_calculation(ds):
    assert lcof_h2(ds, "P1").net == pytest.approx(oracle_p1(), abs=1e-9)


def test_p2_hand_calculation(ds):
    b = lcof_h2(ds, "P2")
    assert b.net == pytest.approx(oracle_p2(), abs=1e-9)
    assert b.selected == ("45Q",)


@pytest.mark.parametrize("pid, expected", [
    ("P1", 1.2822), ("P2", 1.2340), ("P3", 1.1584), ("P4", 0.3068), ("P5", 3.0689), ("P6", 2.2009),
])
def test_h2_lcof(ds, pid, expected):
    assert lcof_h2(ds, pid).net == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize("pid, expected", [
    ("P7", 4.2558), ("P8", 4.1464), ("P9", 2.9160), ("P10", 5.3616), ("P11", 4.1075),
    ("P12", 5.4494), ("P13", 5.9138), ("P14", 3.7501), ("P15", 3.5985),
])
def test_slf_lcof(ds, pid, expected):
    assert lcof_slf(ds, pid).net == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize("pid", [f"P{i}" for i in range(1, 16)])
def test_items_sum_to_net(ds, pid):
    b = lcof(ds, pid)
    assert math.fsum(b.as_dict().values()) == pytest.approx(b.net, abs=1e-12)
    assert b.gross + b.credits == pytest.approx(b.net)
    assert b.credits <= 0
    assert set(LABELS) <= set(b.as_dict())


def test_smr_unit_cost(ds):
    assert annualized_unit_cost(ds.technologies["smr"], ds.finance) == pytest.approx(3.7225, abs=1e-4)


def test_zero_capacity_factor(ds):
    tech = replace(ds.technologies["electrolysis"], capacity_factor=0.0)
    with pytest.raises(ZeroCapacityFactor):
        annualized_unit_cost(tech, ds.finance)


def test_larger_credit_is_taken(ds):
    b = lcof_h2(ds, "P6")
    best = max(b.credit_options, key=b.credit_options.get)
    assert b.selected == (best,)
    assert -b["credit_45q"] - b["credit_45v"] == pytest.approx(b.credit_options[best])


def test_dual_credit_stacks(ds):
    single = lcof_h2(ds, "P6")
    dual = lcof_h2(ds, "P6", dual_credit=True)
    assert dual.net == pytest.approx(0.7291, abs=1e-4)
    assert set(dual.selected) == {"45Q", "45V"}
    assert single.net - dual.net == pytest.approx(min(single.credit_options.values()))


def test_co2_sale_keeps_ci_and_cuts_45q(ds):
    base = lcof_h2(ds, "P6", dual_credit=True)
    sale = lcof_h2(ds, "P6", dual_credit=True, co2_sale=CO2Sale(40.0))
    assert sale.ci == base.ci
    assert sale["credit_45v"] == base["credit_45v"]
    assert sale["credit_45q"] == pytest.approx(base["credit_45q"] * 0.05)
    assert sale["co2_sale"] < 0
    assert sale.what_if


def test_co2_sale_avoided_costs_lower_net(ds):
    nets = [lcof_h2(ds, "P6", co2_sale=CO2Sale(40.0, avoided=a)).net for a in ("none", "storage", "transport_storage")]
    assert nets[0] > nets[1] > nets[2]


def test_co2_sale_validation():
    with pytest.raises(ValueError):
        CO2Sale(10, fraction=1.5)
    with pytest.raises(ValueError):
        CO2Sale(10, avoided="pipeline")


def test_negative_cost_item_rejected():
    with pytest.raises(InvariantViolation):
        LcofBreakdown("P1", "USD/kg", (("capital", -1.0),), 0.0, "kgCO2e/kg")
    with pytest.raises(InvariantViolation):
        LcofBreakdown("P1", "USD/kg", (("credit_45v", 0.5),), 0.0, "kgCO2e/kg")


def test_gallon_energy(ds):
    assert slf_gj_per_gal(ds) == pytest.approx(0.13957, abs=1e-5)


def test_dac_cost_is_net_of_credit(ds):
    b = lcof_slf(ds, "P9")
    net_per_t = 280 - 130 * DF12
    assert b["dac_co2_net"] == pytest.approx(67.7 / 1000 * net_per_t * slf_gj_per_gal(ds))
    assert b["credit_45q"] == 0


def test_45z_scales_with_duration(ds):
    full = lcof_slf(ds, "P13", FuelCreditScenario(15))
    none = lcof_slf(ds, "P13", FuelCreditScenario(0))
    assert none["credit_45z"] == 0
    assert full.net < none.net


def test_rfs_and_lcfs(ds):
    plain = lcof_slf(ds, "P14")
    credited = lcof_slf(ds, "P14", FuelCreditScenario(0, 100, {"D6": 1.0}))
    assert credited["rfs"] == pytest.approx(-1.64)
    assert credited["lcfs"] < 0
    assert plain.net - credited.net == pytest.approx(1.64 - credited["lcfs"])


def test_lcfs_never_becomes_a_cost(ds):
    # a CI above the benchmark would make LCFS a cost; it is floored instead
    with pytest.warns(UserWarning):
        b = lcof_slf(ds, "P7", FuelCreditScenario(0, 100, {}, lcfs_benchmark=20.0))
    assert b["lcfs"] == 0


@settings(max_examples=25, deadline=None)
@given(st.floats(0, 300), st.floats(0, 300))
def test_higher_lcfs_price_never_raises_cost(ds, a, b):
    lo, hi = sorted((a, b))
    for pid in ("P11", "P13", "P15"):
        assert lcof_slf(ds, pid, FuelCreditScenario(0, hi)).net <= lcof_slf(ds, pid, FuelCreditScenario(0, lo)).net + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(0, 5), st.floats(0, 5))
def test_higher_rin_price_never_raises_cost(ds, a, b):
    lo, hi = sorted((a, b))
    high = lcof_slf(ds, "P15", FuelCreditScenario(0, 0, {"D5": hi})).net
    low = lcof_slf(ds, "P15", FuelCreditScenario(0, 0, {"D5": lo})).net
    assert high <= low + 1e-12


def test_stacking_on_one_facility_is_refused(ds):
    chain = ds.pathway("P2").with_facility("h2_plant", select="all")
    with pytest.raises(ClaimViolation):
        lcof_h2(ds, chain)


def test_ineligible_rfs_category(ds):
    chain = replace(ds.pathway("P9"), rfs_category="D3")
    with pytest.raises(IneligibleRfsCategory):
        lcof_slf(ds, chain)


@pytest.mark.parametrize("pid, expected", [
    ("P2", 70.2), ("P3", 65.8), ("P4", 316.7), ("P5", 83.3), ("P6", 83.4),
    ("P7", 382.7), ("P8", 370.0), ("P9", 724.3), ("P12", 134.6), ("P13", 206.5), ("P15", 161.2),
])
def test_lscm(ds, pid, expected):
    assert lscm(ds, pid).lscm == pytest.approx(expected, abs=0.1)


def test_lscm_dual_credit(ds):
    assert lscm(ds, "P6", dual_credit=True).lscm == pytest.approx(134.1, abs=0.1)


def test_lscm_no_mitigation(ds):
    with pytest.raises(NoMitigation):
        lscm(ds, "P1")


def test_lscm_without_incentive_is_not_applicable(ds):
    assert not lscm(ds, "P14").applicable


def test_methane_fee_counts_against_subsidy(ds):
    comp = policy_components(ds, "P2")
    assert comp["methane_fee"] == pytest.approx(-1.26 * 0.435 * KG)


def test_lscm_is_total_over_delta(ds):
    r = lscm(ds, "P3")
    assert r.lscm == pytest.approx(math.fsum(r.components.values()) / r.ci_delta * 1000)


def test_subsidy_point(ds):
    ref = lcof_h2(ds, "P1").ci
    reduction, subsidy = subsidy_point(ds, "P4", ref)
    assert reduction == pytest.approx(11.1433, abs=1e-4)
    assert subsidy == pytest.approx(3.0 * DF10, abs=1e-4)
    _, with_45y = subsidy_point(ds, "P4", ref, include_45y=True)
    assert with_45y > subsidy
