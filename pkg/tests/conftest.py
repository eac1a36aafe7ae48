import pytest

from raagcx.fixtures import FIXTURES, fixture_blowups, fixture_collections
from raagcx.graph import small_graphs


@pytest.fixture(scope="session")
def blowups():
    return fixture_blowups()


@pytest.fixture(scope="session")
def collections():
    return fixture_collections()


@pytest.fixture(scope="session")
def graphs4():
    return small_graphs(4)


@pytest.fixture(params=sorted(FIXTURES))
def fixture_graph(request):
    return FIXTURES[request.param]


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion: ``done()`` marks it passed; otherwise it stays failed."""
    number = request.node.get_closest_marker("criterion").args[0]
    title = request.node.get_closest_marker("criterion").args[1]
    ACCEPTANCE[number] = (False, title)

    class _Recorder:
        def done(self, detail=""):
            ACCEPTANCE[number] = (True, f"{title}{': ' + detail if detail else ''}")

    return _Recorder()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {text}")
