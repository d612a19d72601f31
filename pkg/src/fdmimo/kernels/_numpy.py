"""Vectorized numpy implementations of the hot kernels (fallback backend)."""

import numpy as np


def min_image_sq_dists(pts, centers, shifts):
    diff = pts[:, None, None, :] - centers[None, :, None, :] + shifts[None, None, :, :]
    return np.square(diff).sum(axis=-1).min(axis=-1)


def hardening_sqinr_users(a_all, pilot_rows, na, kd, alpha_u, alpha_d, inr):
    rho_u = 1.0 - alpha_u
    rho_d = 1.0 - alpha_d
    a_own = a_all[0]
    a_pilot = a_all[pilot_rows]
    s_c1 = a_pilot.sum(axis=0)
    s_c2 = np.square(a_pilot).sum(axis=0)
    s_all = a_all.sum()
    d = 1.0 + a_own + s_c1
    num = alpha_u**2 * np.square(a_own) * na**2 / d
    noise_interf = alpha_u**2 * na * (1.0 + s_all)
    contam = alpha_u**2 * na**2 * s_c2 / d
    si_dac = alpha_u**2 * alpha_d * rho_d * kd * na**2 * inr
    si_res = alpha_u**2 * alpha_d**2 * kd * na**2 * inr
    adc = na * alpha_u * rho_u * (a_own + s_all + alpha_d * na * inr + 1.0)
    return num / (noise_interf + contam + si_dac + si_res + adc)
