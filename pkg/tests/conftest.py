import pytest

from staticdec.catalog import CatalogSpace, catalog_metric
from staticdec.products import flat_metric

from helpers import h2_static

# criterion number -> (passed, summary); filled by the acceptance tests
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        passed, summary = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {n}: {summary}")


@pytest.fixture
def h2_lorentz():
    return catalog_metric(CatalogSpace("H2eps", eps=-1, r=1.0))


@pytest.fixture
def minkowski3():
    return flat_metric(3, [(-1, 1)] * 3, signs=[-1, 1, 1], name="minkowski")


@pytest.fixture
def h2_static_spec():
    return h2_static()


