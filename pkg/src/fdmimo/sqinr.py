"""Closed-form SQINR/SINR expressions for the matched-filter reverse link.

The hardening SQINR denominator splits into five named groups:
interference-plus-noise, pilot contamination, DAC distortion through the
SI loop, residual SI, and the ADC distortion bracket.  The breakdown keeps
them separate for term-level debugging and for the sampling oracle.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .linkbudget import LinkBudget


@dataclass(frozen=True)
class SqinrBreakdown:
    numerator: float
    noise_and_interf: float
    pilot_contam: float
    si_dac_distortion: float
    si_residual: float
    adc_distortion_bracket: float

    @property
    def den_terms(self) -> dict:
        return {
            "noise_and_interf": self.noise_and_interf,
            "pilot_contam": self.pilot_contam,
            "si_dac_distortion": self.si_dac_distortion,
            "si_residual": self.si_residual,
            "adc_distortion_bracket": self.adc_distortion_bracket,
        }

    @property
    def sqinr(self) -> float:
        return self.numerator / sum(self.den_terms.values())

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["term", "value"])
            writer.writerow(["numerator", repr(self.numerator)])
            for name, value in self.den_terms.items():
                writer.writerow([name, repr(value)])
            writer.writerow(["sqinr", repr(self.sqinr)])


def _user_sums(lb: LinkBudget, k: int):
    a_own = lb.a_own(k)
    ap = lb.a_pilot(k)
    s_c1 = float(ap.sum())
    s_c2 = float(np.square(ap).sum())
    return a_own, s_c1, s_c2, lb.total_sum()


def sqinr_hardening(lb: LinkBudget, k: int) -> SqinrBreakdown:
    """Channel-hardening SQINR of uplink user k with estimated CSI.

    The interference sums run over every cell including the cell of
    interest and over every uplink user, the desired one included; the ADC
    bracket carries the own-user term twice (estimate correlation).
    """
    a_own, s_c1, s_c2, s_all = _user_sums(lb, k)
    au, ad = lb.alpha_u, lb.alpha_d
    na, kd, inr = lb.num_antennas, lb.num_dl_users, lb.inr
    d = 1.0 + a_own + s_c1
    numerator = au**2 * a_own**2 * na**2 / d
    bracket = 2.0 * a_own + (s_all - a_own) + ad * na * inr + 1.0
    return SqinrBreakdown(
        numerator=numerator,
        noise_and_interf=au**2 * na * (1.0 + s_all),
        pilot_contam=au**2 * na**2 * s_c2 / d,
        si_dac_distortion=au**2 * ad * (1.0 - ad) * kd * na**2 * inr,
        si_residual=au**2 * ad**2 * kd * na**2 * inr,
        adc_distortion_bracket=na * au * (1.0 - au) * bracket,
    )


def hardening_term_predictions(lb: LinkBudget, k: int) -> dict:
    """Ensemble power of each labeled received-signal term, noise-normalized.

    This is the hardening denominator regrouped by term label (the linear
    part of the pilot power lives in the interference group of the
    denominator split); the sampling oracle compares its empirical term
    powers against these.
    """
    a_own, s_c1, s_c2, s_all = _user_sums(lb, k)
    au, ad = lb.alpha_u, lb.alpha_d
    na, kd, inr = lb.num_antennas, lb.num_dl_users, lb.inr
    d = 1.0 + a_own + s_c1
    s_own_cell = float((lb.power_ratios[0] * lb.snr_all[0]).sum())
    bracket = 2.0 * a_own + (s_all - a_own) + ad * na * inr + 1.0
    return {
        "desired": au**2 * a_own**2 * na**2 / d,
        "est_error": au**2 * a_own * na,
        "intra_cell": au**2 * na * (s_own_cell - a_own),
        "pilot_contam": au**2 * (na * s_c1 + na**2 * s_c2 / d),
        "inter_cell": au**2 * na * (s_all - s_own_cell - s_c1),
        "si_fd": au**2 * ad**2 * kd * na**2 * inr,
        "aqnm_aggregate": au**2 * ad * (1.0 - ad) * kd * na**2 * inr
        + na * au * (1.0 - au) * bracket,
        "noise": au**2 * na,
    }


def sqinr_perfect_csi(lb: LinkBudget, k: int) -> float:
    """Hardening SQINR of user k when the CSI is perfect.

    The pilot-contamination denominator group and the estimate-quality
    normalizer drop out; every other denominator group is kept as is.
    """
    a_own, _, _, s_all = _user_sums(lb, k)
    au, ad = lb.alpha_u, lb.alpha_d
    na, kd, inr = lb.num_antennas, lb.num_dl_users, lb.inr
    bracket = 2.0 * a_own + (s_all - a_own) + ad * na * inr + 1.0
    den = (
        au**2 * na * (1.0 + s_all)
        + au**2 * ad * (1.0 - ad) * kd * na**2 * inr
        + au**2 * ad**2 * kd * na**2 * inr
        + na * au * (1.0 - au) * bracket
    )
    return a_own**2 * (na**2 + na) / ((1.0 + a_own) * den)


def sinr_half_duplex(lb: LinkBudget, k: int) -> float:
    """Full-resolution SINR of user k with the SI loop silenced.

    This is the hardening form specialized to an ideal converter and no
    self-interference; pilot contamination is retained.
    """
    a_own, s_c1, s_c2, s_all = _user_sums(lb, k)
    na = lb.num_antennas
    d = 1.0 + a_own + s_c1
    num = na * a_own**2 / d
    return num / (1.0 + s_all + na * s_c2 / d)


def sinr_no_contamination(lb: LinkBudget, k: int) -> float:
    """Half-duplex full-resolution SINR with pilot contamination neglected.

    Exact when the reuse set is empty, an approximation otherwise.
    """
    a_own = lb.a_own(k)
    s_all = lb.total_sum()
    na = lb.num_antennas
    return na * a_own**2 / ((1.0 + a_own) * (1.0 + s_all))


def se_of_mean_ratio(x_mean: float, y_mean: float) -> float:
    """Spectral-efficiency bound log2(1 + E[x]/E[y]) for independent x, y."""
    if y_mean <= 0:
        raise ValueError("mean of the denominator variable must be > 0")
    return math.log2(1.0 + x_mean / y_mean)
