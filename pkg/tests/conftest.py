from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

from helpers import fixture_text  # noqa: E402


@pytest.fixture(scope="session")
def minimal_text() -> str:
    return fixture_text("minimal.proc")


@pytest.fixture(scope="session")
def fig1_text() -> str:
    return fixture_text("fig1.proc")


@pytest.fixture(scope="session")
def reference_text() -> str:
    return fixture_text("reference.proc")
