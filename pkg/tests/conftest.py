import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from twinnet.synth import generate_dataset  # noqa: E402


@pytest.fixture(scope="session")
def small_synth():
    return generate_dataset(3000, label="A", duration=6 * 3600, seed=7)


ACCEPTANCE_LINES: list[str] = []


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", help="also run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow; pass --runslow to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
