"""Session fixtures: shipped cases, scenarios, and solver settings."""

from __future__ import annotations

from pathlib import Path

import pytest

import gridxpand
from gridxpand import SolveConfig, apply_scenario, load_case, load_scenario

CASE_DIR = Path(gridxpand.__file__).parent / "cases"


@pytest.fixture(scope="session")
def case_dir() -> Path:
    return CASE_DIR


@pytest.fixture(scope="session")
def six_bus_case():
    return load_case(CASE_DIR / "six_bus.json")


@pytest.fixture(scope="session")
def six_bus_scenario():
    return load_scenario(CASE_DIR / "six_bus_scenario.json")


@pytest.fixture(scope="session")
def six_bus(six_bus_case, six_bus_scenario):
    """Shipped 6-bus case with the scenario overlay applied."""
    return apply_scenario(six_bus_case, six_bus_scenario)


@pytest.fixture(scope="session")
def six_bus_robust(six_bus_scenario):
    return six_bus_scenario.robust


@pytest.fixture(scope="session")
def rts24_case():
    return load_case(CASE_DIR / "rts24.json")


@pytest.fixture(scope="session")
def rts24_scenario():
    return load_scenario(CASE_DIR / "rts24_scenario.json")


@pytest.fixture(scope="session")
def rts24(rts24_case, rts24_scenario):
    """Shipped 24-bus case with the scenario overlay applied."""
    return apply_scenario(rts24_case, rts24_scenario)


@pytest.fixture(scope="session")
def external_config():
    return SolveConfig(backend="external", time_limit=120.0, mip_gap=1e-9)


@pytest.fixture(scope="session")
def oracle_config():
    return SolveConfig(backend="oracle", time_limit=120.0)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import support

    if support.ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in support.ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
