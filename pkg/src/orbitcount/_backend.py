"""Kernel backend selection.

The compiled Cython kernels are used when available; the pure-Python
mirror is the fallback.  Set ORBITCOUNT_BACKEND=python (or =compiled) to
force a choice; forcing "compiled" fails loudly if the extension is
missing.  Both backends are bit-identical, so the choice only affects
speed.
"""

from __future__ import annotations

import os

from . import _purekernels

_forced = os.environ.get("ORBITCOUNT_BACKEND")

if _forced == "python":
    kernels = _purekernels
    BACKEND = "python"
elif _forced == "compiled":
    from . import _kernels

    kernels = _kernels
    BACKEND = "compiled"
else:
    try:
        from . import _kernels

        kernels = _kernels
        BACKEND = "compiled"
    except ImportError:
        kernels = _purekernels
        BACKEND = "python"


def backend_name() -> str:
    return BACKEND
