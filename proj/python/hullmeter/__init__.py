"""Python bindings for the hullmeter convex-hull entanglement measure."""

import json as _json

from ._hullmeter import (
    SCHEMA,
    ConvergenceError,
    ValidationError,
    __version__,
    basis,
    devectorize,
    ghz_alpha,
    ghz_state,
    max_product_overlap,
    random_density,
    vectorize,
    werner_mix,
)
from . import _hullmeter


def measure(matrix, dims, *, seed=1, restarts=32, directions=4096, refine_steps=200, tol=1e-6, normalize=None):
    """Return the schema-1 report for one density matrix as a dict."""
    return _json.loads(
        _hullmeter.measure_json(matrix, list(dims), seed, restarts, directions, refine_steps, tol, normalize)
    )


def ppt_boundary(matrix, dims):
    """Return the PPT boundary report (V_star, C_ppt, ...) as a dict."""
    return _json.loads(_hullmeter.ppt_json(matrix, list(dims)))


__all__ = [
    "SCHEMA",
    "ConvergenceError",
    "ValidationError",
    "__version__",
    "basis",
    "devectorize",
    "ghz_alpha",
    "ghz_state",
    "max_product_overlap",
    "measure",
    "ppt_boundary",
    "random_density",
    "vectorize",
    "werner_mix",
]
