"""Pick the compiled partition kernel when available, else the pure-Python one.

Set ``HJELMSLEV_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _partition_py

try:
    from . import _partition_cy  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _partition_cy = None

BACKENDS = {"python": _partition_py.Partition}
if _partition_cy is not None:
    BACKENDS["cython"] = _partition_cy.Partition

DEFAULT_BACKEND = os.environ.get("HJELMSLEV_BACKEND") or ("cython" if _partition_cy is not None else "python")
if DEFAULT_BACKEND not in BACKENDS:
    raise ImportError(f"HJELMSLEV_BACKEND={DEFAULT_BACKEND!r} is not available; have {sorted(BACKENDS)}")


def partition_class(name: str | None = None):
    try:
        return BACKENDS[name or DEFAULT_BACKEND]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}") from None
