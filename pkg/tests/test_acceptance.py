"""Acceptance criteria, one test each.

Every check inside a criterion is printed; the terminal summary lists one
PASS/FAIL line per criterion.  Tolerances live in ``fuelpath.checks`` and
are the reference ones.
"""

import pytest

from fuelpath.checks import CRITERIA, CRITERIA_TITLES, run_acceptance

RESULTS: dict[int, bool] = {}


@pytest.mark.parametrize("n", sorted(CRITERIA), ids=lambda n: f"criterion_{n}")
def test_criterion(ds, n):
    checks = run_acceptance(ds, None, [n])
    assert checks, "a criterion must run at least one check"
    for c in checks:
        print(c.line())
    passed = all(c.passed for c in checks)
    RESULTS[n] = passed
    print(f"criterion {n} ({CRITERIA_TITLES[n]}): {'PASS' if passed else 'FAIL'}")
    assert passed, "\n".join(c.line() for c in checks if not c.passed)
