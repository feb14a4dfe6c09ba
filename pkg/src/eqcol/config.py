"""Resource caps.

Both caps guard against runaway inputs, not against correct use; every
shipped scenario stays far below them.  They may be raised through the
environment when someone really wants a larger computation.
"""

from __future__ import annotations

import os


def _cap(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{name} must be positive")
    return value


CONDUCTOR_CAP = _cap("EQCOL_CONDUCTOR_CAP", 10_000)
ORDER_CAP = _cap("EQCOL_ORDER_CAP", 512)
