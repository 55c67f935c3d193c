import os

MAX_SIZE = 64
"""Largest host algebra accepted by the exhaustive checks."""

DEFAULT_BUDGET = 2_000_000


def budget(override=None):
    """Search budget: explicit argument, else ``SHEAFDUAL_BUDGET``, else the default."""
    if override is not None:
        return int(override)
    env = os.environ.get("SHEAFDUAL_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET
