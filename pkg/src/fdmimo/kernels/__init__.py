"""Backend selection for the hot numeric kernels.

The environment variable ``FDMIMO_BACKEND`` picks the implementation:

* ``auto`` (default): numba-compiled loops if numba imports, numpy otherwise
* ``numba``: require the compiled kernels, fail loudly if unavailable
* ``numpy``: pure-numpy vectorized fallback

Both backends compute the same quantities; results agree to floating-point
rounding (summation order differs).  ``benchmarks/bench_backends.py``
compares their throughput.
"""

import os

_requested = os.environ.get("FDMIMO_BACKEND", "auto").lower()

if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(f"FDMIMO_BACKEND must be auto, numba, or numpy; got {_requested!r}")

if _requested == "numpy":
    from . import _numpy as _backend

    BACKEND = "numpy"
else:
    try:
        from . import _numba as _backend

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from . import _numpy as _backend

        BACKEND = "numpy"

min_image_sq_dists = _backend.min_image_sq_dists
hardening_sqinr_users = _backend.hardening_sqinr_users

__all__ = ["BACKEND", "min_image_sq_dists", "hardening_sqinr_users"]
