"""Numerical laboratory for surfaces of prescribed mean curvature.

The heavy lifting happens in the C++ core (``hsurf._core``); this package
adds dict-friendly wrappers around the JSON-shaped entry points.
"""

import json as _json

from ._core import (  # noqa: F401
    Field,
    HsurfConfigError,
    HsurfError,
    closure_integral,
    command_names,
    estrella_minimum,
    flat_curve,
    rotational,
    run_acceptance,
)
from ._core import run_command as _run_command
from ._core import solve_graph as _solve_graph
from ._core import stability_report as _stability_report

__all__ = [
    "Field",
    "HsurfConfigError",
    "HsurfError",
    "closure_integral",
    "command_names",
    "estrella_minimum",
    "flat_curve",
    "rotational",
    "run_acceptance",
    "run_command",
    "solve_graph",
    "stability_report",
]

__version__ = "0.1.0"


def solve_graph(field, domain):
    """Solve the Dirichlet problem for the prescribed-curvature graph
    equation over a masked grid described by a domain dict."""
    return _solve_graph(field, _json.dumps(domain))


def stability_report(field, surface, estrella_resolution=1000):
    """Assemble the stability operator on a surface dict and report the
    principal eigenvalue, Jacobi residuals, and radius-bound data."""
    return _stability_report(field, _json.dumps(surface), estrella_resolution)


def run_command(command, config=None, out_dir=".", quick=False, seed=0):
    """Run a CLI subcommand programmatically; returns the summary dict."""
    payload = _json.dumps(config or {})
    return _json.loads(_run_command(command, payload, out_dir, quick, seed))
