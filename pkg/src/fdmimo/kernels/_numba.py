"""Numba-compiled versions of the loop kernels."""

import numba

from . import _impl

min_image_sq_dists = numba.njit(cache=True)(_impl.min_image_sq_dists)
hardening_sqinr_users = numba.njit(cache=True)(_impl.hardening_sqinr_users)
