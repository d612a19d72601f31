"""Scalar link budgets seen from the base station of interest.

Everything downstream of geometry works on one matrix: the power-ratio
weighted link SNRs of every network uplink user as received at BS 0, plus
the SI interference-to-noise ratio and the converter gains.  Upink users
are pilot-aligned across cells, so the contaminator of user k in a cell of
the reuse set is that cell's user k.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .geometry import NetworkDrop, pilot_reuse_set
from .kernels import min_image_sq_dists
from .params import SystemParams, db_to_linear


def large_scale_gain(r, chi, params: SystemParams):
    """Linear large-scale gain L_ref * chi / r^eta.

    ``r`` may be a scalar or array of link distances in meters; distances
    below the configured floor are rejected (the pathloss law blows up).
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < params.min_ue_bs_distance_m):
        raise ValueError(
            f"link distance below the {params.min_ue_bs_distance_m} m floor"
        )
    chi = np.asarray(chi, dtype=float)
    if np.any(chi <= 0):
        raise ValueError("shadowing coefficients must be positive")
    g = db_to_linear(params.pathloss_intercept_db) * chi / r**params.pathloss_exponent
    return g if g.shape else float(g)


def snr_of_link(gain, params: SystemParams):
    """Linear uplink SNR of a link with large-scale gain ``gain``.

    The BS antenna gain applies to every UE-to-BS link (it is a receive
    array gain); the SI loop is characterized solely by its own channel
    gain and never sees it.
    """
    g = np.asarray(gain, dtype=float)
    if np.any(g < 0):
        raise ValueError("large-scale gain must be >= 0")
    snr = g * db_to_linear(params.bs_antenna_gain_db) * params.uplink_power_w / params.noise_power_w()
    return snr if snr.shape else float(snr)


@dataclass(frozen=True)
class LinkBudget:
    """Per-user scalar inputs of the closed-form SQINR, for all users of cell 0.

    snr_all[l, k] is the raw link SNR of user k of cell l at BS 0; row 0
    holds the desired users.  power_ratios carries P_{l,k} / P_u.
    """

    snr_all: np.ndarray       # (n_cells, K_ul)
    power_ratios: np.ndarray  # (n_cells, K_ul)
    pilot_cells: np.ndarray   # indices into rows of snr_all (the reuse set)
    inr: float
    num_dl_users: int
    num_antennas: int
    alpha_u: float
    alpha_d: float
    pu_over_psi: float = 0.005  # P_u / P_SI, used only by the sampling oracle

    def __post_init__(self):
        if np.any(self.snr_all < 0):
            raise ValueError("link SNRs must be >= 0")
        if np.any((self.power_ratios <= 0) | (self.power_ratios > 1)):
            raise ValueError("power ratios must lie in (0, 1]")
        if not (0 < self.alpha_u <= 1 and 0 < self.alpha_d <= 1):
            raise ValueError("converter gains must lie in (0, 1]")
        if self.inr < 0:
            raise ValueError("INR must be >= 0")

    @property
    def n_users(self) -> int:
        return self.snr_all.shape[1]

    def a_all(self) -> np.ndarray:
        """Power-ratio weighted link SNRs (the quantities summed in the forms)."""
        return self.power_ratios * self.snr_all

    def a_own(self, k: int) -> float:
        return float(self.power_ratios[0, k] * self.snr_all[0, k])

    def a_pilot(self, k: int) -> np.ndarray:
        """Weighted SNRs of the pilot-sharing users of user k."""
        return self.power_ratios[self.pilot_cells, k] * self.snr_all[self.pilot_cells, k]

    def total_sum(self) -> float:
        return float(self.a_all().sum())

    @classmethod
    def synthetic(cls, snr_all, pilot_cells=(), inr=0.0, num_dl_users=1,
                  num_antennas=100, alpha_u=1.0, alpha_d=1.0, power_ratios=None,
                  pu_over_psi=0.005) -> "LinkBudget":
        """Hand-built budget for tests and oracle experiments."""
        snr_all = np.atleast_2d(np.asarray(snr_all, dtype=float))
        if power_ratios is None:
            power_ratios = np.ones_like(snr_all)
        return cls(
            snr_all=snr_all,
            power_ratios=np.asarray(power_ratios, dtype=float),
            pilot_cells=np.asarray(pilot_cells, dtype=np.int64),
            inr=float(inr),
            num_dl_users=int(num_dl_users),
            num_antennas=int(num_antennas),
            alpha_u=float(alpha_u),
            alpha_d=float(alpha_d),
            pu_over_psi=float(pu_over_psi),
        )


def assemble_link_budget(drop: NetworkDrop, params: SystemParams) -> LinkBudget:
    """Collapse a drop into the budget of the cell of interest.

    After this call the closed forms need no further geometry access.
    """
    lattice = drop.lattice
    n_cells = lattice.n_cells
    k_ul = params.users_ul_per_cell
    bs0 = lattice.bs_xy[lattice.cell_index_of_interest][None, :]
    flat = drop.ue_ul_xy.reshape(-1, 2)
    d2 = min_image_sq_dists(flat, bs0, lattice.wrap_shifts)[:, 0]
    r = np.sqrt(d2).reshape(n_cells, k_ul)
    chi = drop.shadow_ul[lattice.cell_index_of_interest]
    gains = large_scale_gain(r, chi, params)
    snr = snr_of_link(gains, params)
    ratios = np.tile(np.asarray(params.power_ratios(), dtype=float), (n_cells, 1))
    return LinkBudget(
        snr_all=snr,
        power_ratios=ratios,
        pilot_cells=pilot_reuse_set(lattice),
        inr=params.inr(),
        num_dl_users=params.users_dl_per_cell,
        num_antennas=params.num_antennas,
        alpha_u=params.uplink_quantizer().alpha,
        alpha_d=params.downlink_quantizer().alpha,
        pu_over_psi=params.uplink_power_w / params.si_power_w,
    )


def budget_to_csv(lb: LinkBudget, path) -> None:
    """Debug dump: one row per uplink user of the cell of interest."""
    a = lb.a_all()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user", "a_own", "pilot_sum", "pilot_sq_sum", "total_sum", "inr"])
        for k in range(lb.n_users):
            ap = lb.a_pilot(k)
            writer.writerow(
                [k, repr(lb.a_own(k)), repr(float(ap.sum())),
                 repr(float(np.square(ap).sum())), repr(float(a.sum())), repr(lb.inr)]
            )
