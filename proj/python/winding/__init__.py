"""Python interface to the winding toolkit.

Array-valued results come back as numpy arrays; structured reports come
back as plain dicts decoded from the library's JSON output.
"""

import json

from . import _core
from ._core import (
    WindingError,
    angle,
    gauss_map,
    jacobian,
    kernel,
    mollifier,
    mollifier_normalisation,
    semmes_constants,
    spiral,
    sup_norm,
)

__version__ = _core.version

__all__ = [
    "WindingError",
    "angle",
    "diagnose_circle",
    "diagnose_icosphere",
    "diagnose_mesh",
    "gauss_map",
    "holder_fit",
    "jacobian",
    "kernel",
    "ld_norm",
    "mollifier",
    "mollifier_normalisation",
    "semmes_constants",
    "spiral",
    "sup_norm",
    "sweep",
    "weak_star",
    "winding_number",
]


def ld_norm(d, epsilon, m=1, nodes_per_eps=100):
    """L^d norm of the second fundamental form against its closed form."""
    return json.loads(_core.ld_norm_json(d, epsilon, m, nodes_per_eps))


def winding_number(thetas):
    """Net turning of an unwrapped angle sequence, in full turns."""
    return json.loads(_core.winding_number_json(list(thetas)))


def weak_star(epsilon, m=1):
    """Pairings of the derivative kernel with the standard test functions."""
    return json.loads(_core.weak_star_json(epsilon, m))


def sweep(config_text=""):
    """Runs an epsilon sweep from "key = value" config text.

    Returns (report, exit_code) with the same meaning as the CLI.
    """
    text, code = _core.sweep_json(config_text)
    return json.loads(text), code


def diagnose_mesh(vertices, faces, max_centres=0):
    return json.loads(_core.diagnose_mesh_json(vertices, faces, max_centres))


def diagnose_icosphere(subdivisions, max_centres=0):
    return json.loads(_core.diagnose_icosphere_json(subdivisions, max_centres))


def diagnose_circle(n, max_centres=0):
    return json.loads(_core.diagnose_circle_json(n, max_centres))


def holder_fit(u, f):
    """Holder exponent estimate for the graph of samples f over u."""
    return json.loads(_core.holder_fit_json(list(u), list(f)))
