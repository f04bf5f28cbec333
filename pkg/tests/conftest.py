import pytest

from ambc_noma.channel import SystemParams
from ambc_noma.iqi import IqiProfile


@pytest.fixture
def ideal_params():
    return SystemParams()


@pytest.fixture
def iqi_params():
    return SystemParams(iqi=IqiProfile.uniform(1.05, 20.0))


@pytest.fixture
def mild_iqi_params():
    # mild enough that the near user and the BD stay decodable
    return SystemParams(iqi=IqiProfile.uniform(1.1, 5.0))


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
