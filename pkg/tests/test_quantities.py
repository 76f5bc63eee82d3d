import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuelpath.errors import IncompatibleDimensions, InvariantViolation, MissingFuelProperties, NonPositiveIndex, UnknownUnit
from fuelpath.quantities import FuelProperties, Quantity, convert, escalate_cost, parse_unit

H2 = FuelProperties("h2", 142.0, 1.18, 0.0)
SLF = FuelProperties("slf", 46.0, 1.05, 71.0)


def test_kg_hydrogen_to_gj():
    assert math.isclose(Quantity.of(1, "kg").magnitude("GJ_HHV", H2), 0.142)


def test_identity_conversion():
    q = Quantity.of(3.7, "GJ")
    assert q.to("GJ").value == 3.7
    # bare GJ is an HHV quantity
    assert Quantity.of(1, "GJ").magnitude("GJ_HHV") == 1.0


def test_hhv_to_lhv_and_back():
    lhv = Quantity.of(1, "GJ_HHV").magnitude("GJ_LHV", SLF)
    assert math.isclose(lhv, 1 / 1.05)
    assert math.isclose(lhv * 1.05, 1.0)


def test_lhv_needs_fuel_properties():
    with pytest.raises(MissingFuelProperties):
        Quantity.of(1, "GJ_HHV").to("GJ_LHV")


@pytest.mark.parametrize("a, b", [("GJ", "kg"), ("USD/GJ", "USD"), ("tCO2", "tCH4")])
def test_mismatched_dimensions(a, b):
    with pytest.raises(IncompatibleDimensions):
        Quantity.of(1, a) + Quantity.of(1, b)
    if a != "GJ":
        with pytest.raises(IncompatibleDimensions):
            convert(Quantity.of(1, a), b, SLF)


def test_mass_energy_needs_heating_value():
    assert convert(Quantity.of(1, "GJ"), "kg", H2).value == pytest.approx(1 / 0.142)


def test_add_rescales_to_left_unit():
    total = Quantity.of(1, "GJ") + Quantity.of(1000, "MJ")
    assert math.isclose(total.value, 2.0)
    assert str(total.unit) == "GJ"


def test_compound_units():
    assert math.isclose(Quantity.of(55, "USD/MWh").magnitude("USD/GJ"), 55 / 3.6)
    assert math.isclose(Quantity.of(1, "MMBtu_LHV").magnitude("GJ_LHV"), 1.055)
    assert math.isclose(Quantity.of(1, "kW").magnitude("GJ/yr"), 8760 * 0.0036)
    per_kg = Quantity.of(3.0, "USD") / Quantity.of(1, "kg")
    assert per_kg.unit.dims == parse_unit("USD/kg").dims


def test_unknown_unit():
    with pytest.raises(UnknownUnit):
        parse_unit("furlong")


@pytest.mark.parametrize("value, i0, i1, expected", [(100, 542, 576, 106.27), (543, 576, 542, 510.95)])
def test_escalate_cost(value, i0, i1, expected):
    assert escalate_cost(value, i0, i1) == pytest.approx(expected, abs=0.01)


def test_escalate_rejects_bad_index():
    with pytest.raises(NonPositiveIndex):
        escalate_cost(100, 0, 576)


@given(st.floats(1, 1e6), st.floats(1, 1e6))
def test_escalate_same_index_is_identity(value, index):
    assert escalate_cost(value, index, index) == pytest.approx(value)


def test_fuel_properties_invariants():
    with pytest.raises(InvariantViolation):
        FuelProperties("x", 10.0, 0.9, 0.0)
    with pytest.raises(InvariantViolation):
        FuelProperties("x", 10.0, 1.1, -1.0)


units = st.sampled_from(["GJ_HHV", "GJ_LHV", "MMBtu_LHV", "MMBtu_HHV", "kg", "t", "MWh", "kWh"])


@given(st.floats(-1e6, 1e6, allow_nan=False), units, units)
def test_round_trip(value, a, b):
    there = Quantity.of(value, a).magnitude(b, SLF)
    back = Quantity.of(there, b).magnitude(a, SLF)
    assert back == pytest.approx(value, rel=1e-12, abs=1e-9)


@given(st.floats(0, 1e4), st.floats(0, 1e4))
def test_conversion_is_linear(x, y):
    a = Quantity.of(x, "MMBtu_LHV").magnitude("GJ_HHV", SLF)
    b = Quantity.of(y, "MMBtu_LHV").magnitude("GJ_HHV", SLF)
    assert Quantity.of(x + y, "MMBtu_LHV").magnitude("GJ_HHV", SLF) == pytest.approx(a + b)
