import logging

import pytest

import utils
from errors import InvalidParameters
from utils import CliConfig, configure_logging, get_config, get_report_path


def test_defaults():
    config = get_config()
    assert config == CliConfig()
    assert config.precision_bits == 128
    assert config.regime == "auto"


def test_environment_values(monkeypatch):
    monkeypatch.setenv("SHARELAB_PRECISION", "256")
    monkeypatch.setenv("SHARELAB_REGIME", "EXACT")
    monkeypatch.setenv("SHARELAB_JET_ORDER", "20")
    config = get_config()
    assert config.precision_bits == 256
    assert config.regime == "exact"
    assert config.jet_order == 20


def test_config_is_cached(monkeypatch):
    first = get_config()
    monkeypatch.setenv("SHARELAB_PRECISION", "256")
    assert get_config() is first
    utils.set_config(None)
    assert get_config().precision_bits == 256


def test_malformed_environment(monkeypatch):
    monkeypatch.setenv("SHARELAB_TOL", "tiny")
    with pytest.raises(InvalidParameters):
        get_config()


@pytest.mark.parametrize(
    "changes",
    [{"precision_bits": 32}, {"tol": 0.0}, {"regime": "symbolic"}, {"output": "xml"}, {"jet_order": -1}],
)
def test_invalid_values(changes):
    with pytest.raises(InvalidParameters):
        CliConfig(**changes)


def test_overrides_skip_none():
    config = CliConfig().with_overrides(precision_bits=None, tol=1e-10, relaxed=True)
    assert config.precision_bits == 128
    assert config.tol == 1e-10
    assert config.relaxed


def test_report_path(monkeypatch, tmp_path):
    assert get_report_path() == tmp_path / "reports.json"
    monkeypatch.delenv("SHARELAB_REPORT_FILE")
    assert get_report_path() == utils.DEFAULT_REPORT_FILE


def test_configure_logging():
    configure_logging("debug")
    assert logging.getLogger().level == logging.DEBUG
    configure_logging("WARNING")
    assert logging.getLogger().level == logging.WARNING
    with pytest.raises(InvalidParameters):
        configure_logging("chatty")
