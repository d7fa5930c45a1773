"""Python front end for the RIS key generation simulator."""

import json

from ._core import (
    ConfigError,
    cdf_quantize,
    double_threshold_quantize,
    monobit_p,
    normalize_config,
    preset_config,
    preset_names,
    reconcile,
    runs_p,
    selftest,
)
from . import _core


def run_preset(name, seed=None, frames=None, feature=None, quantizer=None):
    """Run a built-in preset and return the report as a dict."""
    return json.loads(_core.run_preset_json(name, seed, frames, feature, quantizer))


def run_config(text, seed=None, frames=None):
    """Run a scenario given as INI text."""
    return json.loads(_core.run_config_json(text, seed, frames))


__all__ = [
    "ConfigError",
    "cdf_quantize",
    "double_threshold_quantize",
    "monobit_p",
    "normalize_config",
    "preset_config",
    "preset_names",
    "reconcile",
    "run_config",
    "run_preset",
    "runs_p",
    "selftest",
]
