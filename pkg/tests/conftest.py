import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ac4x", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ac4x")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def torus_coords(n):
    from ac4x.models import TorusGrid

    return TorusGrid(n).coords()


def kt_coords(n):
    from ac4x.models import KTGrid

    return KTGrid(n).coords()


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion; returns the verdict."""
    lines = request.config.stash[_ACCEPTANCE]

    def record(num, name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2} {name}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
