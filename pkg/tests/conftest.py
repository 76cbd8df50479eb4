import pytest

from abasym import acceptance


@pytest.fixture(scope="session")
def sech_sd():
    return acceptance.sech_scattering()


@pytest.fixture(scope="session")
def sech_dd():
    return acceptance.sech_delta(1.0)


@pytest.fixture(scope="session")
def sech_lm():
    return acceptance.sech_model()[0]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(RESULTS):
        for line in RESULTS[cid].splitlines():
            terminalreporter.write_line(line)
