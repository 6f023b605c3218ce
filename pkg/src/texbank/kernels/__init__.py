"""Texture-matrix kernels with a compiled core and a numpy fallback.

The compiled extension (``_native``) is used when present; otherwise the
vectorized numpy implementation is selected.  Both expose the same functions
and produce bit-identical counts.  Set ``TEXBANK_KERNELS=numpy`` or
``TEXBANK_KERNELS=native`` to force a backend.
"""

import os

_requested = os.environ.get("TEXBANK_KERNELS", "").strip().lower()

if _requested not in ("", "native", "numpy"):
    raise ImportError(
        f"TEXBANK_KERNELS must be 'native' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    from texbank.kernels import _numpy as _impl

    BACKEND = "numpy"
else:
    try:
        from texbank.kernels import _native as _impl  # type: ignore[attr-defined]

        BACKEND = "native"
    except ImportError:
        if _requested == "native":
            raise
        from texbank.kernels import _numpy as _impl

        BACKEND = "numpy"

glcm_counts = _impl.glcm_counts
rlm_counts = _impl.rlm_counts
box_counts = _impl.box_counts


def backend_name() -> str:
    """Which kernel implementation was selected at import time."""
    return BACKEND
