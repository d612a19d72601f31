"""Limiting spectral-efficiency expressions and numerical convergence probes.

Each registered probe drives the matching closed form along a monotone
schedule (own-link SNR or antenna count) and reports the gap to the limit
formula.  Probes marked assertable are expected to converge; the
power-scaling probe is report-only because its normalization leaves a
residual antenna-linear term in the driven form.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .linkbudget import LinkBudget
from .sqinr import sinr_half_duplex, sqinr_hardening, sqinr_perfect_csi

DEFAULT_SNR_SCHEDULE = tuple(10.0**e for e in range(2, 9))
DEFAULT_ANTENNA_SCHEDULE = tuple(int(10**e) for e in range(2, 9))


def sqinr_limit_full_resolution(lb: LinkBudget, k: int) -> float:
    """Linear SQINR with ideal converters at a fixed antenna count.

    This is an exact identity with the hardening SQINR at alpha = 1, not
    just a limit.
    """
    a_own = lb.a_own(k)
    ap = lb.a_pilot(k)
    d = 1.0 + a_own + float(ap.sum())
    na, kd = lb.num_antennas, lb.num_dl_users
    num = a_own**2 * na / d
    den = 1.0 + lb.total_sum() + na * float(np.square(ap).sum()) / d + na * kd * lb.inr
    return num / den


def se_limit_full_resolution(lb: LinkBudget, k: int) -> float:
    return math.log2(1.0 + sqinr_limit_full_resolution(lb, k))


def se_limit_high_snr(num_antennas: int, alpha_u: float) -> float:
    """SE ceiling as the own-link SNR grows with fixed resolution."""
    return math.log2(1.0 + num_antennas / (alpha_u * (2.0 - alpha_u)))


def se_limit_power_scaling(e_ratio_snr, alpha_u, alpha_d, num_dl_users, inr) -> float:
    """SE limit when transmit powers shrink as 1/N_a with fixed energy budget."""
    den = 1.0 + alpha_d * (alpha_u * num_dl_users + 1.0 - alpha_u) * inr
    return math.log2(1.0 + alpha_u * e_ratio_snr**2 / den)


def sqinr_limit_many_antennas(lb: LinkBudget, k: int) -> float:
    """Linear SQINR limit as the antenna-to-user ratio grows; inf if unbounded."""
    a_own = lb.a_own(k)
    ap = lb.a_pilot(k)
    d = 1.0 + a_own + float(ap.sum())
    au, ad = lb.alpha_u, lb.alpha_d
    num = au * a_own**2 / d
    den = au * float(np.square(ap).sum()) / d + ad * (au * lb.num_dl_users + 1.0 - au) * lb.inr
    if den == 0.0:
        return math.inf
    return num / den


def se_limit_many_antennas(lb: LinkBudget, k: int) -> float:
    limit = sqinr_limit_many_antennas(lb, k)
    return math.inf if math.isinf(limit) else math.log2(1.0 + limit)


@dataclass(frozen=True)
class LimitReport:
    limit_id: str
    limit_value: float                # linear SQINR, or bits/s/Hz for identities
    probe_values: tuple               # (driver value, achieved value) pairs
    converged: bool
    relative_gap: float
    assertable: bool


def _with_own_snr(lb: LinkBudget, k: int, snr: float) -> LinkBudget:
    snr_all = lb.snr_all.copy()
    snr_all[0, k] = snr
    return dataclasses.replace(lb, snr_all=snr_all)


def _probe_own_snr_ceiling(lb, k, schedule):
    limit = float(lb.num_antennas)
    probes = tuple((s, sinr_half_duplex(_with_own_snr(lb, k, s), k)) for s in schedule)
    gap = abs(probes[-1][1] - limit) / limit
    return LimitReport("own_snr_ceiling", limit, probes, gap < 1e-3, gap, True)


def _probe_high_snr(lb, k, schedule):
    limit = lb.num_antennas / (lb.alpha_u * (2.0 - lb.alpha_u))
    probes = tuple((s, sqinr_perfect_csi(_with_own_snr(lb, k, s), k)) for s in schedule)
    gap = abs(probes[-1][1] - limit) / limit
    return LimitReport("high_snr", limit, probes, gap < 5e-3, gap, True)


def _probe_full_resolution(lb, k, schedule):
    """Identity check: hardening SQINR at alpha=1 against the fixed-N_a form."""
    lb1 = dataclasses.replace(lb, alpha_u=1.0, alpha_d=1.0)
    probes = []
    worst = 0.0
    for s in schedule:
        driven = _with_own_snr(lb1, k, s)
        value = sqinr_hardening(driven, k).sqinr
        probes.append((s, value))
        ref = sqinr_limit_full_resolution(driven, k)
        worst = max(worst, abs(value - ref) / ref)
    limit = sqinr_limit_full_resolution(_with_own_snr(lb1, k, schedule[-1]), k)
    return LimitReport("full_resolution", limit, tuple(probes), worst < 1e-12, worst, True)


def _probe_many_antennas(lb, k, schedule):
    limit = sqinr_limit_many_antennas(lb, k)
    probes = tuple(
        (n, sqinr_hardening(dataclasses.replace(lb, num_antennas=int(n)), k).sqinr)
        for n in schedule
    )
    if math.isinf(limit):
        return LimitReport("many_antennas", limit, probes, False, math.inf, False)
    gap = abs(probes[-1][1] - limit) / limit
    return LimitReport("many_antennas", limit, probes, gap < 1e-3, gap, True)


def _probe_power_scaling(lb, k, schedule):
    """Report-only: drive N_a with powers scaled as 1/N_a."""
    e_snr = lb.a_own(k)
    limit = 2.0 ** se_limit_power_scaling(
        e_snr, lb.alpha_u, lb.alpha_d, lb.num_dl_users, lb.inr
    ) - 1.0
    probes = []
    for n in schedule:
        n = int(n)
        scaled = dataclasses.replace(
            lb, snr_all=lb.snr_all / n, inr=lb.inr / n, num_antennas=n
        )
        probes.append((n, sqinr_hardening(scaled, k).sqinr))
    gap = abs(probes[-1][1] - limit) / limit if limit > 0 else math.inf
    return LimitReport("power_scaling", limit, tuple(probes), False, gap, False)


PROBES = {
    "own_snr_ceiling": (_probe_own_snr_ceiling, DEFAULT_SNR_SCHEDULE),
    "high_snr": (_probe_high_snr, DEFAULT_SNR_SCHEDULE),
    "full_resolution": (_probe_full_resolution, DEFAULT_SNR_SCHEDULE),
    "many_antennas": (_probe_many_antennas, DEFAULT_ANTENNA_SCHEDULE),
    "power_scaling": (_probe_power_scaling, DEFAULT_ANTENNA_SCHEDULE),
}


def convergence_probe(limit_id: str, lb: LinkBudget, k: int = 0, schedule=None) -> LimitReport:
    """Run one registered limit probe on a budget."""
    if limit_id not in PROBES:
        raise KeyError(f"unknown limit id {limit_id!r}; known: {sorted(PROBES)}")
    fn, default_schedule = PROBES[limit_id]
    return fn(lb, k, tuple(schedule) if schedule is not None else default_schedule)


def probe_all(lb: LinkBudget, k: int = 0) -> list:
    return [convergence_probe(limit_id, lb, k) for limit_id in PROBES]
