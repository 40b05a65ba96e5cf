import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, derandomize=True, print_blob=True)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []

SWEEP_MAX = 200


@pytest.fixture(scope="session")
def wonderful_sweep():
    from kstab.stability import sweep

    return {r.m: r for r in sweep("wonderful", 4, SWEEP_MAX)}


@pytest.fixture(scope="session")
def blowup_sweep():
    from kstab.stability import sweep

    return {r.m: r for r in sweep("blowup", 5, SWEEP_MAX, with_ricci=True)}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
