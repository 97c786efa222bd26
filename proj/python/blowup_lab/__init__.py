"""Python front end for the flat-profile blowup laboratory."""

import csv
import io
import json

from ._core import (
    ConfigError,
    DomainError,
    ModelParams,
    NumericalError,
    __version__,
    blowup_time,
    config_keys,
    hermite,
    hermite_norm2,
    kernel,
    make_params,
    mehler_suite,
    mode_multiplier,
    profile,
    run_experiment,
    scale_factor,
    spectral_suite,
)
from . import _core


def _dump(config):
    return json.dumps(config or {})


def normalize_config(config=None):
    return json.loads(_core.normalize_config(_dump(config)))


def simulate(config=None):
    """Rows of the modal trajectory as dicts of floats."""
    rows = csv.DictReader(io.StringIO(_core.simulate_csv(_dump(config))))
    return [{key: float(value) for key, value in row.items()} for row in rows]


def shoot(config=None):
    """Survivor certificate as a dict."""
    return json.loads(_core.shoot_json(_dump(config)))


def run(subcommand, config=None):
    return _core.run_experiment(subcommand, _dump(config))
