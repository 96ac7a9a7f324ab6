import pytest

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for the acceptance criterion of this test."""
    n = request.node.get_closest_marker("acceptance").args[0]
    store = request.config.stash[_RESULTS]

    def record(passed: bool, detail: str):
        line = f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        store[n] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_RESULTS, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(store):
        terminalreporter.write_line(store[n])
