"""Moment dynamics of semiclassical states.

Configurations are plain dicts with the same keys as the JSON run files of
the ``momentflow`` command-line tool.
"""

import json

from ._momentflow import (
    CapacityError,
    ConfigError,
    DomainError,
    MomentflowError,
    bracket,
    coherent_moments,
    squeezed_moments,
    uncertainty_margin,
    version,
)
from . import _momentflow

__all__ = [
    "CapacityError",
    "ConfigError",
    "DomainError",
    "MomentflowError",
    "bracket",
    "coherent_moments",
    "compare",
    "order_check",
    "simulate",
    "squeezed_moments",
    "uncertainty_margin",
    "version",
]

__version__ = version()


def simulate(config):
    """Integrate the truncated moment system; returns metadata and columns."""
    return json.loads(_momentflow.simulate_json(json.dumps(config)))


def compare(config):
    """Errors of the moment system (and adiabatic solver) against the Fock oracle."""
    return json.loads(_momentflow.compare_json(json.dumps(config)))


def order_check(config):
    """hbar scaling of the mismatch between the embedded and the full system."""
    return json.loads(_momentflow.order_check_json(json.dumps(config)))
