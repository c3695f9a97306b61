"""Kernel backend selection.

Prefers the compiled Cython kernels and falls back to the pure-Python
implementations when the extension is unavailable. Set the environment
variable ``LOCALCD_KERNELS=python`` (or ``cython``) before import to force a
backend; ``cython`` raises if the extension cannot be imported.
"""

import os

from . import _kernels_py

try:
    from . import _kernels_cy
except ImportError:
    _kernels_cy = None

_choice = os.environ.get("LOCALCD_KERNELS", "auto").lower()
if _choice == "python":
    _active = _kernels_py
elif _choice == "cython":
    if _kernels_cy is None:
        raise ImportError(
            "LOCALCD_KERNELS=cython but the compiled extension is not available"
        )
    _active = _kernels_cy
else:
    _active = _kernels_cy if _kernels_cy is not None else _kernels_py

BACKEND = _active.BACKEND_NAME

ppr_push_csr = _active.ppr_push_csr
hk_push_csr = _active.hk_push_csr
sweep_profile_csr = _active.sweep_profile_csr


def available_backends() -> dict:
    """Name -> module for every importable backend (for tests/benchmarks)."""
    out = {"python": _kernels_py}
    if _kernels_cy is not None:
        out["cython"] = _kernels_cy
    return out
