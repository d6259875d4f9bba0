"""Steady-state heat transport through a qubit-resonator junction."""

import json as _json

from ._rabiheat import (
    BathSide,
    ConfigError,
    DegenerateCutoffError,
    EigenSystem,
    JunctionParams,
    Renormalization,
    SingularSystemError,
    SolverMode,
    TransportResult,
    __version__,
    evaluate_point,
    gstar_estimate,
    grwa_tls_elements,
    jc_levels,
    power_spectrum,
    preset_names,
    rectification,
    solve_junction,
    three_level_analytic,
    tls_chi,
    tls_current,
    tls_rectification,
    w_function,
)
from . import _rabiheat


def preset(name):
    """Resolved configuration of a named protocol, as a dict."""
    return _json.loads(_rabiheat.preset_config(name))


def run(config, threads=1):
    """Run a configuration (dict or JSON text) and return the report dict."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _json.loads(_rabiheat.run_config(text, threads))
