import copy
import sys

import pytest

from fuelpath.techdata import default_document, load_dataset


@pytest.fixture(scope="session")
def default_doc():
    return default_document()


@pytest.fixture(scope="session")
def ds(default_doc):
    return load_dataset(default_doc)


@pytest.fixture
def doc(default_doc):
    """A private copy of the default document that a test may edit."""
    return copy.deepcopy(default_doc)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    from fuelpath.checks import CRITERIA_TITLES

    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(f"criterion {n:>2} ({CRITERIA_TITLES[n]}): {'PASS' if results[n] else 'FAIL'}")
    terminalreporter.write_line(f"{sum(results.values())}/{len(results)} criteria pass")
