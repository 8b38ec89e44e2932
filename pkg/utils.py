# utils.py
"""
Environment-driven configuration and logging setup.

Values come from the process environment (a local `.env` file is loaded
first). Command-line flags override them, see `CliConfig.with_overrides`.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path

from dotenv import load_dotenv

from errors import InvalidParameters

load_dotenv()

REGIMES = ("exact", "float", "auto")
OUTPUTS = ("text", "structured")

DEFAULT_REPORT_FILE = Path.home() / ".sharelab_reports.json"


def env(name: str, default=None):
    """Get an environment variable with an optional default."""
    return os.getenv(name, default)


def configure_logging(level: str | None = None) -> None:
    """Configure the root logger once; repeated calls only adjust the level."""
    name = (level or env("SHARELAB_LOG_LEVEL", "WARNING")).upper()
    numeric = getattr(logging, name, None)
    if not isinstance(numeric, int):
        raise InvalidParameters(f"unknown log level {name!r}")
    root = logging.getLogger()
    if not root.handlers:
        logging.basicConfig(
            level=numeric,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )
    root.setLevel(numeric)


def get_report_path() -> Path:
    """Path of the JSON report history used by `--out` and the HTTP API."""
    p = env("SHARELAB_REPORT_FILE")
    return Path(p).expanduser() if p else DEFAULT_REPORT_FILE


@dataclass(frozen=True)
class CliConfig:
    precision_bits: int = 128
    tol: float = 1e-24
    regime: str = "auto"
    relaxed: bool = False
    output: str = "text"
    root_maxiter: int = 500
    newton_maxiter: int = 80
    jet_order: int = 12

    def __post_init__(self) -> None:
        if self.precision_bits < 53:
            raise InvalidParameters(f"precision_bits must be >= 53, got {self.precision_bits}")
        if not self.tol > 0:
            raise InvalidParameters(f"tol must be positive, got {self.tol}")
        if self.regime not in REGIMES:
            raise InvalidParameters(f"regime must be one of {REGIMES}, got {self.regime!r}")
        if self.output not in OUTPUTS:
            raise InvalidParameters(f"output must be one of {OUTPUTS}, got {self.output!r}")
        if self.root_maxiter < 1 or self.newton_maxiter < 1:
            raise InvalidParameters("iteration budgets must be positive")
        if self.jet_order < 0:
            raise InvalidParameters("jet order must be non-negative")

    @classmethod
    def from_env(cls) -> "CliConfig":
        try:
            return cls(
                precision_bits=int(env("SHARELAB_PRECISION", 128)),
                tol=float(env("SHARELAB_TOL", 1e-24)),
                regime=env("SHARELAB_REGIME", "auto").lower(),
                root_maxiter=int(env("SHARELAB_ROOT_MAXITER", 500)),
                newton_maxiter=int(env("SHARELAB_NEWTON_MAXITER", 80)),
                jet_order=int(env("SHARELAB_JET_ORDER", 12)),
            )
        except ValueError as e:
            if isinstance(e, InvalidParameters):
                raise
            raise InvalidParameters(f"malformed SHARELAB_* environment value: {e}") from e

    def with_overrides(self, **changes) -> "CliConfig":
        """Return a copy with every non-None keyword applied."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


_config: CliConfig | None = None


def get_config() -> CliConfig:
    """Process-wide configuration, read from the environment on first use."""
    global _config
    if _config is None:
        _config = CliConfig.from_env()
    return _config


def set_config(config: CliConfig | None) -> None:
    """Install (or with None, reset) the process-wide configuration."""
    global _config
    _config = config
