import pytest
from hypothesis import settings

from sbcubic.field import make_field
from sbcubic.heisenberg import SGroup, standard_pair

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def F5():
    return make_field(5)


@pytest.fixture(scope="session")
def F7():
    return make_field(7)


@pytest.fixture(scope="session")
def F13():
    return make_field(13)


@pytest.fixture(scope="session")
def F25():
    return make_field(5, 2)


@pytest.fixture(scope="session")
def S7(F7):
    return SGroup(standard_pair(F7))


@pytest.fixture(scope="session")
def S13(F13):
    return SGroup(standard_pair(F13))


def pytest_addoption(parser):
    parser.addoption("--workers", type=int, default=1, help="processes for the PGL_3(F_7) scan")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = next((m for name, m in list(sys.modules.items()) if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
