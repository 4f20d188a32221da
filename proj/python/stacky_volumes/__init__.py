"""Exact orbifold volumes, Ehrhart limits and BPS invariants."""

import json

from ._core import (
    ExactScalar,
    StackyError,
    delta_count,
    delta_limit,
    half_l,
    plid_zero,
    run_cli,
)
from . import _core


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def ehrhart_limit(polytope):
    return _core.ehrhart_limit(_dump(polytope))


def count_dilation(polytope, r):
    return _core.count_dilation(_dump(polytope), r)


def orbifold_volume(datum, fbar="one"):
    return _core.orbifold_volume(_dump(datum), fbar)


def volume_series(datum, R, fbar="one"):
    return _core.volume_series(_dump(datum), R, fbar)


def quiver_bps(quiver, gamma_bound, level_bound):
    return {tuple(g): levels for g, levels in _core.quiver_bps(_dump(quiver), gamma_bound, level_bound)}


def run(command, params, *flags):
    """Runs one CLI job on a parameter dict; returns (exit code, parsed report)."""
    import os
    import tempfile

    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
        json.dump(params, f)
        path = f.name
    try:
        code, out, _ = run_cli([command, "--input", path, *flags])
    finally:
        os.unlink(path)
    return code, json.loads(out) if out.strip().startswith("{") else out


__all__ = [
    "ExactScalar",
    "StackyError",
    "count_dilation",
    "delta_count",
    "delta_limit",
    "ehrhart_limit",
    "half_l",
    "orbifold_volume",
    "plid_zero",
    "quiver_bps",
    "run",
    "run_cli",
    "volume_series",
]
