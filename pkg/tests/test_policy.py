import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuelpath.errors import InvariantViolation, UnknownVariant
from fuelpath.policy import (
    CreditClaim,
    FuelCreditScenario,
    PolicySuite,
    V45Tier,
    credit_45q,
    credit_45v,
    credit_45z_per_gal,
    dac_co2_net_cost,
    lcfs_credit_per_gal,
    methane_fee_per_gj,
    net_input_price_45y,
    rfs_credit_per_gal,
    validate_claims,
)


@pytest.mark.parametrize("ci, expected", [(3.3, 0.60), (4.0, 0.0), (-18.0, 3.0), (0.45, 1.002), (1.49, 1.002), (2.0, 0.75)])
def test_credit_45v(ci, expected):
    assert credit_45v(ci) == expected


@given(st.floats(-100, 10), st.floats(-100, 10))
def test_45v_never_rises_with_ci(a, b):
    lo, hi = sorted((a, b))
    assert credit_45v(lo) >= credit_45v(hi)


@pytest.mark.parametrize("ci, expected", [(0, 1.615), (50, 0.0), (-98, 4.7804), (80, 0.0)])
def test_credit_45z(ci, expected):
    assert credit_45z_per_gal(ci, 0.82) == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize("variant, mass, expected", [("sequestration", 1, 85), ("dac_utilization", 0, 0), ("dac_utilization", 1, 130)])
def test_credit_45q(variant, mass, expected):
    assert credit_45q(variant, mass) == expected


def test_45q_unknown_variant():
    with pytest.raises(UnknownVariant):
        credit_45q("enhanced_oil", 1)


@pytest.mark.parametrize("leak, fee, expected", [(0.29, 1500, 0.435), (0, 1500, 0), (0.29, 900, 0.261)])
def test_methane_fee(leak, fee, expected):
    assert methane_fee_per_gj(leak, fee) == pytest.approx(expected)


@pytest.mark.parametrize("rate, df, expected, tol", [(26, 0.808, 21.6, 0.2), (0, 0.808, 42.6, 1e-12), (26, 1.0, 16.6, 1e-12)])
def test_net_electricity_price(rate, df, expected, tol):
    assert net_input_price_45y(42.6, rate, df) == pytest.approx(expected, abs=tol)


def test_45y_floors_at_zero():
    with pytest.warns(UserWarning):
        assert net_input_price_45y(10, 26, 1.0) == 0.0


@pytest.mark.parametrize("price, expected", [(1.0, 1.64), (0, 0), (1.25, 2.05)])
def test_rfs(price, expected):
    assert rfs_credit_per_gal(price, 1.64) == pytest.approx(expected)


@pytest.mark.parametrize("ci, bench, expected", [(0, 80.36, 1.0125), (80.36, 80.36, 0), (0, 89.37, 1.1261)])
def test_lcfs(ci, bench, expected):
    assert lcfs_credit_per_gal(ci, bench, 100) == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize("rate, df, expected, tol", [(130, 0.896, 163.5, 1), (0, 1, 280, 1e-12), (130, 1.0, 150, 1e-12)])
def test_dac_net_cost(rate, df, expected, tol):
    assert dac_co2_net_cost(280, rate, df) == pytest.approx(expected, abs=tol)


@given(st.floats(-200, 200), st.floats(0, 500), st.floats(0, 500))
def test_lcfs_linear_in_price(ci, p1, p2):
    a = lcfs_credit_per_gal(ci, 80.36, p1)
    b = lcfs_credit_per_gal(ci, 80.36, p2)
    assert lcfs_credit_per_gal(ci, 80.36, p1 + p2) == pytest.approx(a + b, abs=1e-9)


def test_tiers_must_be_contiguous():
    gap = (V45Tier(-math.inf, 0.45, 3.0), V45Tier(0.5, 4.0, 1.0))
    with pytest.raises(InvariantViolation):
        PolicySuite(v45_tiers=gap)
    short = (V45Tier(-math.inf, 3.0, 3.0),)
    with pytest.raises(InvariantViolation):
        PolicySuite(v45_tiers=short)


def test_policy_durations_checked_against_life():
    with pytest.raises(InvariantViolation):
        PolicySuite(durations={"45Q": 20}).check_durations(15)


def test_scenario_invariants():
    with pytest.raises(InvariantViolation):
        FuelCreditScenario(z45_duration_years=-1)
    with pytest.raises(InvariantViolation):
        FuelCreditScenario(lcfs_price=-1)
    with pytest.raises(InvariantViolation):
        FuelCreditScenario(16).check(15)
    assert FuelCreditScenario(rin_prices={"D5": 1}).rin_prices == {"D3": 0.0, "D5": 1, "D6": 0.0}


def test_credit_claim_instrument():
    with pytest.raises(UnknownVariant):
        CreditClaim("48C", "plant", 1.0)


def test_split_facilities_may_stack(ds):
    assert validate_claims(ds.pathway("P11")) == []


def test_one_facility_cannot_stack(ds):
    chain = ds.pathway("P2").with_facility("h2_plant", select="all")
    problems = validate_claims(chain)
    assert len(problems) == 1 and "45Q and 45V" in problems[0]


def test_synthetic_fuel_from_hydrogen_gets_no_rins(ds):
    from dataclasses import replace

    assert validate_claims(replace(ds.pathway("P9"), rfs_category="D3"))


def test_45z_needs_a_fuel_plant(ds):
    chain = ds.pathway("P4").with_facility("h2_plant", credits=("45Z",))
    assert any("45Z" in p for p in validate_claims(chain))


def test_shipped_pathways_are_clean(ds):
    for chain in ds.pathways.values():
        assert validate_claims(chain) == []
