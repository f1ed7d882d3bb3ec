"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when importable; otherwise, or
when the environment variable ``CMVAR_PURE_PYTHON`` is set to a non-empty
value other than ``0``, the pure-Python twins from ``_pykernels`` are used.
``BACKEND`` names the active choice.
"""

import os

from . import _pykernels

_forced = os.environ.get("CMVAR_PURE_PYTHON", "") not in ("", "0")

if _forced:
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

pebble_game = _impl.pebble_game
sparsity_violation = _impl.sparsity_violation
wall_scan = _impl.wall_scan


def backends():
    """Return ``{name: module}`` for every importable backend."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
