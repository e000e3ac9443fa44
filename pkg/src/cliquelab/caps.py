"""Safety caps for exact enumeration and graph materialization.

All enumeration-style oracles estimate their work up front and refuse to run
past the cap instead of hanging.  CLIQUELAB_CAP overrides the enumeration cap.
"""

from __future__ import annotations

import os

from .errors import CapExceeded

# Packed adjacency rows stay cheap up to this many vertices.
VERTEX_CAP = 4096

# Product graphs are materialized only below this vertex count.
MATERIALIZE_CAP = 10**6

DEFAULT_ENUM_CAP = 10**8

# Exact big-integer results larger than this many bits are refused.
BIGINT_BIT_CAP = 2**33


def enum_cap() -> int:
    raw = os.environ.get("CLIQUELAB_CAP")
    if raw is None:
        return DEFAULT_ENUM_CAP
    try:
        value = int(raw)
    except ValueError as exc:
        raise CapExceeded(f"CLIQUELAB_CAP must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise CapExceeded(f"CLIQUELAB_CAP must be positive, got {value}")
    return value


def check_enum(count: int, what: str) -> None:
    """Refuse enumerations whose size estimate exceeds the cap."""
    cap = enum_cap()
    if count > cap:
        raise CapExceeded(
            f"{what} needs {count} enumeration steps, above the cap {cap} "
            f"(override with CLIQUELAB_CAP)"
        )
