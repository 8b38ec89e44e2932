import os

import pytest
from hypothesis import HealthCheck, settings

import utils

settings.register_profile("ci", max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("dev", max_examples=20, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch, tmp_path):
    """Each test sees default configuration and a private report file."""
    for name in list(os.environ):
        if name.startswith("SHARELAB_"):
            monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("SHARELAB_REPORT_FILE", str(tmp_path / "reports.json"))
    utils.set_config(None)
    yield
    utils.set_config(None)
