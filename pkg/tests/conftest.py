import pytest

from kleingeom.finite_field import Field
from kleingeom.klein import projective_geometry
from kleingeom.projective_space import ProjSpace


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run brute-force gates marked slow")


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow gate; pass --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter, config):
    lines = config._acceptance_lines
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion."""
    def record(label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else "")
        request.config._acceptance_lines.append(line)
        print(line)
        return ok
    return record


@pytest.fixture(scope="session")
def fields():
    cache = {}

    def get(p, k=1):
        if (p, k) not in cache:
            cache[p, k] = Field(p, k)
        return cache[p, k]
    return get


@pytest.fixture(scope="session")
def space(fields):
    cache = {}

    def get(p, k, n):
        if (p, k, n) not in cache:
            cache[p, k, n] = ProjSpace(fields(p, k), n)
        return cache[p, k, n]
    return get


@pytest.fixture(scope="session")
def proj(fields):
    cache = {}

    def get(p, k, n):
        if (p, k, n) not in cache:
            cache[p, k, n] = projective_geometry(fields(p, k), n)
        return cache[p, k, n]
    return get
