import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from compomat.fixtures import (  # noqa: E402
    crystalline_composite,
    default_triclinic_params,
    pair_composite,
    triclinic_composite,
)

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def cry():
    return crystalline_composite()


@pytest.fixture(scope="session")
def tri():
    return triclinic_composite(default_triclinic_params())


@pytest.fixture(scope="session")
def pair3():
    return pair_composite(3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
