"""Loop-form kernels, written to be compilable by numba without changes.

These are the hot inner loops of the Monte Carlo engine: pairwise
wraparound distances for a drop, and the closed-form hardening SQINR
evaluated for every uplink user of the cell of interest.
"""

import numpy as np


def min_image_sq_dists(pts, centers, shifts):
    """Squared distance from each point to each center, minimized over shifts.

    pts: (n, 2), centers: (m, 2), shifts: (s, 2) displacement images
    (include the zero shift for the direct distance).  Returns (n, m).
    """
    n = pts.shape[0]
    m = centers.shape[0]
    s = shifts.shape[0]
    out = np.empty((n, m), dtype=np.float64)
    for i in range(n):
        for j in range(m):
            best = np.inf
            for t in range(s):
                dx = pts[i, 0] - centers[j, 0] + shifts[t, 0]
                dy = pts[i, 1] - centers[j, 1] + shifts[t, 1]
                d2 = dx * dx + dy * dy
                if d2 < best:
                    best = d2
            out[i, j] = best
    return out


def hardening_sqinr_users(a_all, pilot_rows, na, kd, alpha_u, alpha_d, inr):
    """Channel-hardening SQINR for every uplink user of the cell of interest.

    a_all: (cells, users) matrix of power-ratio-weighted link SNRs seen at
    the serving base station; row 0 is the cell of interest.  pilot_rows:
    indices of the cells reusing the cell-of-interest pilots.  Users are
    pilot-aligned, so the contaminator of user k sits in column k.
    """
    n_cells, n_users = a_all.shape
    rho_u = 1.0 - alpha_u
    rho_d = 1.0 - alpha_d
    s_all = 0.0
    for l in range(n_cells):
        for k in range(n_users):
            s_all += a_all[l, k]
    out = np.empty(n_users, dtype=np.float64)
    for k in range(n_users):
        a_own = a_all[0, k]
        s_c1 = 0.0
        s_c2 = 0.0
        for i in range(pilot_rows.shape[0]):
            a = a_all[pilot_rows[i], k]
            s_c1 += a
            s_c2 += a * a
        d = 1.0 + a_own + s_c1
        num = alpha_u * alpha_u * a_own * a_own * na * na / d
        noise_interf = alpha_u * alpha_u * na * (1.0 + s_all)
        contam = alpha_u * alpha_u * na * na * s_c2 / d
        si_dac = alpha_u * alpha_u * alpha_d * rho_d * kd * na * na * inr
        si_res = alpha_u * alpha_u * alpha_d * alpha_d * kd * na * na * inr
        bracket = a_own + s_all + alpha_d * na * inr + 1.0
        adc = na * alpha_u * rho_u * bracket
        out[k] = num / (noise_interf + contam + si_dac + si_res + adc)
    return out
