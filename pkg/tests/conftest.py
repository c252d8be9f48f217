import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oamswipt import (  # noqa: E402
    LinkBudget,
    PropagationParams,
    SystemGeometry,
    build_channels,
    element_layout,
    make_transforms,
)


@pytest.fixture(scope="session")
def geometry():
    return SystemGeometry()


@pytest.fixture(scope="session")
def params():
    return PropagationParams()


@pytest.fixture(scope="session")
def budget():
    return LinkBudget.from_dbm(30.0, -15.0, 0.8, -20.0, -33.0)


@pytest.fixture(scope="session")
def channels(geometry, params):
    return build_channels(element_layout(geometry), params)


@pytest.fixture(scope="session")
def transforms():
    return make_transforms(8, 8)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
