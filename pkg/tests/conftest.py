import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "suite",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

DEMO_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "demo")


@pytest.fixture(scope="session")
def demo_dir() -> str:
    return os.path.abspath(DEMO_DIR)
