import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuelpath.analysis import (
    DEFAULT_RIN_SCENARIOS,
    FOSSIL,
    EfficiencyStudy,
    breakeven_all_conventions,
    breakeven_biogenic_co2_price,
    competitiveness_frontier,
    efficiency_case,
    efficiency_incentive_analysis,
    fit_subsidy_line,
    is_monotone_non_increasing,
    min_duration_in_band,
    net_value_spread,
    pick_winner,
    required_fixed_cost_reduction,
    subsidy_regression,
    sweep_45z_duration,
    with_scaled_service_cost,
)
from fuelpath.errors import DegeneratePoints, NoCrossing
from fuelpath.lcof import CO2Sale, lcof_h2


@pytest.fixture(scope="module")
def grid(ds):
    return competitiveness_frontier(ds)


def test_sweep_curves_fall_with_duration(ds):
    sweep = sweep_45z_duration(ds)
    assert sweep.durations == tuple(range(16))
    for pid, curve in sweep.curves.items():
        assert is_monotone_non_increasing(curve), pid


def test_pathways_without_45z_are_flat(ds):
    curve = sweep_45z_duration(ds, ["P14"]).curves["P14"]
    assert max(curve) == min(curve)


@pytest.mark.parametrize("pid, expected", [("P11", 1), ("P13", 5)])
def test_min_duration_in_band(ds, pid, expected):
    assert min_duration_in_band(ds, pid) == expected


def test_min_duration_none_when_out_of_reach(ds):
    assert min_duration_in_band(ds, "P14", ceiling=1.0) is None


def test_grid_covers_every_cell(grid):
    assert len(grid.cells) == len(DEFAULT_RIN_SCENARIOS) * 16 * 41
    assert grid.rin_scenarios == DEFAULT_RIN_SCENARIOS


def test_winners_stay_in_the_expected_set(grid):
    assert grid.winners() <= {FOSSIL, "P11", "P12", "P13", "P15"}


def test_high_rin_corner(grid):
    assert grid.winner(1.5, 3.0, 0, 0) == "P12"
    assert grid.winner(1.5, 3.0, 15, 200) == "P13"


def test_long_credit_and_high_lcfs_favours_p11(grid):
    assert grid.winner(0.75, 1.25, 15, 200) == "P11"


def test_winner_is_the_cheapest(grid):
    for cell in list(grid.cells.values())[::97]:
        cheapest = min(cell.lcof_by_pathway.values())
        if cell.winner == FOSSIL:
            assert cheapest >= grid.fossil_price
        else:
            assert cell.lcof_by_pathway[cell.winner] == cheapest


def test_fossil_share_shrinks_as_support_grows(grid):
    # every pathway LCOF falls with both axes, so fossil can only lose cells
    for d5, d3 in grid.rin_scenarios:
        panel = grid.panel(d5, d3)
        for i, row in enumerate(panel):
            for j, w in enumerate(row):
                if w != FOSSIL:
                    if i + 1 < len(panel):
                        assert panel[i + 1][j] != FOSSIL
                    if j + 1 < len(row):
                        assert row[j + 1] != FOSSIL


def test_single_point_grid(ds):
    g = competitiveness_frontier(ds, durations=[3], lcfs_prices=[50], rin_scenarios=[(1.0, 2.0)])
    assert len(g.cells) == 1


def test_pathway_order_does_not_change_winners(ds):
    kw = dict(durations=[0, 5, 15], lcfs_prices=[0, 50, 150], rin_scenarios=[(0.75, 1.25)])
    forward = competitiveness_frontier(ds, **kw)
    backward = competitiveness_frontier(ds, pathways=list(reversed(ds.pathway_ids("slf"))), **kw)
    assert {k: c.winner for k, c in forward.cells.items()} == {k: c.winner for k, c in backward.cells.items()}


def test_frontier_is_pure(ds):
    kw = dict(durations=[0, 10], lcfs_prices=[0, 100], rin_scenarios=[(1.5, 2.0)])
    assert competitiveness_frontier(ds, **kw) == competitiveness_frontier(ds, **kw)


@given(st.floats(0, 10), st.dictionaries(st.sampled_from(["A", "B", "C"]), st.floats(-5, 10), min_size=3))
def test_pick_winner(fossil, lcofs):
    order = ["A", "B", "C"]
    w = pick_winner(fossil, lcofs, order)
    values = [fossil] + [lcofs[p] for p in order]
    chosen = fossil if w == FOSSIL else lcofs[w]
    assert chosen == min(values)


def test_ties_go_to_fossil_then_first():
    assert pick_winner(2.0, {"A": 2.0, "B": 3.0}, ["A", "B"]) == FOSSIL
    assert pick_winner(5.0, {"A": 2.0, "B": 2.0}, ["A", "B"]) == "A"


def test_subsidy_regression(ds):
    reg = subsidy_regression(ds)
    assert reg.line.slope == pytest.approx(75.97, abs=0.01)
    assert reg.electrolysis_total == pytest.approx(217.49, abs=0.01)
    assert reg.electrolysis_bonus == pytest.approx(141.52, abs=0.01)


def test_fit_recovers_a_line():
    line = fit_subsidy_line([(0, 1.0), (1, 1.05), (2, 1.1)])
    assert line.slope == pytest.approx(50.0)
    assert line.intercept == pytest.approx(1.0)


@pytest.mark.parametrize("points", [[(1, 2)], [(1, 2), (1, 3)], []])
def test_degenerate_fit(points):
    with pytest.raises(DegeneratePoints):
        fit_subsidy_line(points)


@pytest.mark.parametrize("avoided, expected", [("none", 50.02), ("storage", 41.52), ("transport_storage", 22.02)])
def test_breakeven_prices(ds, avoided, expected):
    assert breakeven_biogenic_co2_price(ds, avoided=avoided) == pytest.approx(expected, abs=0.02)


def test_breakeven_default_in_plausible_band(ds):
    assert 30 <= breakeven_biogenic_co2_price(ds) <= 60


def test_breakeven_meets_the_reference(ds):
    price = breakeven_biogenic_co2_price(ds, xtol=1e-6)
    assert lcof_h2(ds, "P6", co2_sale=CO2Sale(price)).net == pytest.approx(lcof_h2(ds, "P1").net, abs=1e-5)


def test_dearer_storage_needs_a_higher_price(ds):
    base = breakeven_biogenic_co2_price(ds)
    doubled = breakeven_biogenic_co2_price(with_scaled_service_cost(ds, 2.0))
    assert doubled > base


def test_no_crossing_when_selling_nothing(ds):
    with pytest.raises(NoCrossing):
        breakeven_biogenic_co2_price(ds, fraction=0.0)


def test_breakeven_conventions_order(ds):
    prices = breakeven_all_conventions(ds)
    assert prices["none"] > prices["storage"] > prices["transport_storage"]


def test_efficiency_fixed_cost():
    assert efficiency_case(0.4, 0.095).fixed == pytest.approx(197.29)
    assert efficiency_case(0.5, 0.095).fixed == pytest.approx(218.0)


def test_efficiency_net_values(ds):
    cases = efficiency_incentive_analysis(study=EfficiencyStudy.from_dataset(ds))
    assert [round(c.net_value, 2) for c in cases] == pytest.approx([111.7, 111.35, 111.01, 110.66], abs=0.01)
    assert net_value_spread(cases) == pytest.approx(0.0093, abs=1e-4)


def test_required_fixed_cost_reduction(ds):
    assert required_fixed_cost_reduction(study=EfficiencyStudy.from_dataset(ds)) == pytest.approx(0.2898, abs=1e-4)


def test_study_reads_the_dataset(ds):
    s = EfficiencyStudy.from_dataset(ds)
    assert s.biomass_cost == 121 and s.ts_cost == 28 and s.fuel_price == 2.2


@settings(max_examples=30)
@given(st.floats(0.05, 1.0), st.floats(0.0, 0.3))
def test_efficiency_case_components_add_up(eta, n):
    case = efficiency_case(eta, n)
    c = case.components
    assert case.net_value == pytest.approx(c["credit_45z"] + c["revenue_slf"] - c["biomass"] - c["fixed"] - c["vom"] - c["co2_ts"])
    assert min(c.values()) >= 0


def test_efficiency_case_rejects_bad_inputs():
    with pytest.raises(ValueError):
        efficiency_case(0.0, 0.1)
    with pytest.raises(ValueError):
        efficiency_case(0.5, -0.1)
