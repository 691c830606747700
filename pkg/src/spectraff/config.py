"""Size caps and shared constants.

All caps are desk-scale guards: constructors refuse inputs whose exhaustive
enumeration would no longer be cheap, instead of degrading silently.
"""

import os

# Fields larger than this are refused by the context constructors.
MAX_FIELD_SIZE = 2 ** 14

# Dense adjacency / eigensolve cap. May be shrunk (never grown) via the
# SPECTRAFF_MAX_VERTICES environment variable.
DEFAULT_MAX_VERTICES = 4096

# Absolute tolerance for eigenvalue assertions; adjacency matrices are
# integer and well conditioned at desk scale.
SPECTRAL_TOL = 1e-6

# Slack used when a bound cannot be compared in exact rational arithmetic.
FLOAT_SLACK = 1e-9

# Hard ceiling on tuple visits for the exhaustive counting routines.
TUPLE_BUDGET = 10 ** 8

# Default seed for every sampling entry point, documented in the README.
DEFAULT_SEED = 42

ENV_MAX_VERTICES = "SPECTRAFF_MAX_VERTICES"


class CapExceeded(Exception):
    """Raised when a requested computation exceeds a desk-scale cap."""


def max_vertices() -> int:
    """Effective vertex cap: the default, optionally shrunk via environment."""
    raw = os.environ.get(ENV_MAX_VERTICES)
    if raw is None:
        return DEFAULT_MAX_VERTICES
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_MAX_VERTICES
    if value <= 0:
        return DEFAULT_MAX_VERTICES
    return min(value, DEFAULT_MAX_VERTICES)


def check_vertex_cap(n: int, what: str = "graph") -> None:
    cap = max_vertices()
    if n > cap:
        raise CapExceeded(f"{what} needs {n} vertices, cap is {cap}")
