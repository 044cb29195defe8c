"""Shared fixtures, hypothesis configuration, checklist reporting."""
from __future__ import annotations

import sys

import pytest
from hypothesis import HealthCheck, settings

from saturee.sysmodel import SystemConfig

settings.register_profile(
    "numeric",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")


@pytest.fixture
def cfg3() -> SystemConfig:
    """Reference cell: 3 antennas, 3 single-antenna users, 20 MHz."""
    return SystemConfig(M=3, N=3)


@pytest.fixture
def cfg_high() -> SystemConfig:
    """Same cell with 10 dB higher circuit and static consumption."""
    return SystemConfig(M=3, N=3, Pc_prime_dbm=40.0, Po_prime_dbm=50.0)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the end-to-end checklist collected by the acceptance tests."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "CHECKLIST", None) if mod is not None else None
    if lines:
        terminalreporter.section("acceptance checklist")
        for line in lines:
            terminalreporter.write_line(line)
