"""Access to the bundled desk-scale train/test gridworld pair."""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path

BUNDLED = ("fig_train.json", "fig_test.json", "fig_demos.json", "fig_config.json")


def bundled_path(name: str) -> Path:
    """Path to a bundled data file (requires a filesystem install)."""
    if name not in BUNDLED:
        raise ValueError(f"unknown bundled file {name!r}; expected one of {BUNDLED}")
    return Path(str(files("riskirl") / "data" / name))


def bundled_config() -> Path:
    """The ready-to-run experiment config for the bundled environments."""
    return bundled_path("fig_config.json")
