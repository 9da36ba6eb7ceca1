"""Kernel backend selection.

Prefers the compiled Cython kernels when the extension built, falling
back to the pure Python twin.  Set ``ANYONSPEC_PURE_PY=1`` to force the
fallback (useful for benchmarking and for debugging kernel parity).
"""

from __future__ import annotations

import os

if os.environ.get("ANYONSPEC_PURE_PY", "") == "1":
    from . import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels

        BACKEND = "python"
