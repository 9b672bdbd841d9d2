import pytest

from nearspace.nearfield import nearfield_for_order

ACCEPTANCE_LINES = []


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False, help="run long-running checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running, needs --slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def N9():
    return nearfield_for_order(9)


@pytest.fixture(scope="session")
def N64():
    return nearfield_for_order(64)
