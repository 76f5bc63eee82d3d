import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuelpath.errors import InvalidYears, InvariantViolation, PolicyExceedsLife
from fuelpath.finance import FinancialParams, annuity_factor, crf, derating_factor


def pv_sum(rate, years):
    return sum((1 + rate) ** -t for t in range(1, years + 1))


def amortize(principal, rate, years, payment):
    """Balance left after paying ``payment`` at each year end."""
    balance = principal
    for _ in range(years):
        balance = balance * (1 + rate) - payment
    return balance


@pytest.mark.parametrize("rate, years, expected, tol", [
    (0.1, 15, 0.1315, 5e-4),
    (0.0, 10, 0.1, 1e-12),
    (0.1, 1, 1.1, 1e-12),
])
def test_crf(rate, years, expected, tol):
    assert crf(rate, years) == pytest.approx(expected, abs=tol)


@given(st.floats(0.001, 0.3), st.integers(1, 60))
def test_crf_pays_off_the_loan(rate, years):
    assert amortize(1.0, rate, years, crf(rate, years)) == pytest.approx(0.0, abs=1e-7)


@pytest.mark.parametrize("m, expected", [(10, 0.808), (12, 0.896), (15, 1.0)])
def test_derating_factor(m, expected):
    assert derating_factor(0.1, m, 15) == pytest.approx(expected, abs=0.005)


def test_zero_duration_is_worthless():
    assert derating_factor(0.1, 0, 15) == 0.0


def test_duration_past_book_life():
    with pytest.raises(PolicyExceedsLife):
        derating_factor(0.1, 16, 15)


@pytest.mark.parametrize("m, n", [(-1, 15), (1, 0)])
def test_bad_years(m, n):
    with pytest.raises(InvalidYears):
        derating_factor(0.1, m, n)


def test_crf_needs_a_year():
    with pytest.raises(InvalidYears):
        crf(0.1, 0)
    with pytest.raises(InvalidYears):
        annuity_factor(0.1, 0)


@given(st.floats(0.001, 0.5), st.integers(1, 40), st.data())
def test_df_matches_annuity_sum(rate, n, data):
    m = data.draw(st.integers(1, n))
    assert derating_factor(rate, m, n) == pytest.approx(pv_sum(rate, m) / pv_sum(rate, n), rel=1e-10)


@given(st.floats(0.001, 0.5), st.integers(2, 40))
def test_df_increases_with_duration(rate, n):
    values = [derating_factor(rate, m, n) for m in range(n + 1)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(1.0)


def test_financial_params_defaults_to_closed_form():
    fin = FinancialParams()
    assert fin.crf == pytest.approx(crf(0.1, 15))
    assert fin.df(10) == derating_factor(0.1, 10, 15)


def test_pinned_crf_must_be_close():
    assert FinancialParams(crf=0.131).crf == 0.131
    with pytest.raises(InvariantViolation):
        FinancialParams(crf=0.14)


@pytest.mark.parametrize("kwargs", [{"wacc": 0}, {"wacc": 1.0}, {"book_life_years": 0}, {"capacity_factor": 0}])
def test_financial_params_invariants(kwargs):
    with pytest.raises(InvariantViolation):
        FinancialParams(**kwargs)
