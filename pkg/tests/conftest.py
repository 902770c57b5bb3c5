import pytest

from logfactor import Spectrum, build_potential


@pytest.fixture(scope="session")
def grid7():
    return build_potential(Spectrum.log_integer(3), M=7)


@pytest.fixture(scope="session")
def grid16():
    return build_potential(Spectrum.log_integer(3), M=16)


@pytest.fixture(scope="session")
def grid40():
    # levels up to p=13 at n=4 sit well below the top of the matched set
    return build_potential(Spectrum.log_integer(3), M=40)


@pytest.fixture(scope="session")
def grid_prime():
    return build_potential(Spectrum.prime(), M=14)


_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(ok, detail)`` then assert."""
    name = request.node.name

    def record(ok, detail):
        _CRITERIA[name] = (bool(ok), detail)
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda n: int(n.split("_")[1])):
        ok, detail = _CRITERIA[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
