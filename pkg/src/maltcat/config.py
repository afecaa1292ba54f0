"""Global configuration: the carrier-size guard.

Products of products blow up quickly while the quotients this library
actually builds stay small, so every constructor that allocates a new
carrier asks the guard first.  The limit can be set programmatically or
through the MALTCAT_MAX_SIZE environment variable (an explicit call to
``set_max_size`` wins over the environment).
"""

from __future__ import annotations

import os

DEFAULT_MAX_SIZE = 4096

_max_size: int | None = None


class SizeLimitError(RuntimeError):
    """A construction would exceed the configured carrier-size guard."""


def max_size() -> int:
    if _max_size is not None:
        return _max_size
    env = os.environ.get("MALTCAT_MAX_SIZE")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_MAX_SIZE


def set_max_size(limit: int | None) -> None:
    """Override the guard; ``None`` restores env/default behaviour."""
    global _max_size
    if limit is not None and limit < 1:
        raise ValueError("size limit must be positive")
    _max_size = limit


def guard_size(n: int, what: str) -> None:
    limit = max_size()
    if n > limit:
        raise SizeLimitError(f"{what} would have {n} elements, above the limit {limit}")
