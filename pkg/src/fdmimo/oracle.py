"""Sampling oracle: explicit small-scale fading draws validating the closed forms.

Channels, the matched filter, the converter-noise covariances, and every
labeled term of the post-filter received signal are realized explicitly;
term powers are averaged over realizations with the symbol, thermal-noise,
and converter-noise expectations taken in closed form given the channels
(those distributions are exactly known, so sampling them would only add
variance).  Nothing here evaluates the hardening SQINR formula.

All quantities are noise-normalized (sigma = 1): link coefficients enter
as sqrt(weighted SNR) and the SI channel is drawn with per-entry power
equal to the loopback INR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linkbudget import LinkBudget


def _crandn(rng, shape):
    """Standard circularly-symmetric complex Gaussian draws."""
    return math.sqrt(0.5) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of every random quantity the received signal depends on."""

    h_all: np.ndarray      # (n_cells, K, N_a) unit-variance fading at BS 0
    v_prime: np.ndarray    # (N_a,) estimation noise, per-entry power 1/a_own
    h_si: np.ndarray       # (N_a, N_a) SI channel scaled so entries have power INR
    precoders: np.ndarray  # (N_a, K_dl), unit-variance entries


def draw_realization(lb: LinkBudget, k: int, rng) -> ChannelRealization:
    batch = _draw_batch(lb, k, rng, 1)
    return ChannelRealization(
        h_all=batch["h_all"][0], v_prime=batch["v_prime"][0],
        h_si=batch["h_si"][0], precoders=batch["precoders"][0],
    )


def _draw_batch(lb: LinkBudget, k: int, rng, n: int) -> dict:
    n_cells, n_users = lb.snr_all.shape
    na, kd = lb.num_antennas, lb.num_dl_users
    a_own = lb.a_own(k)
    if a_own <= 0:
        raise ValueError("matched filter undefined for zero own-link SNR")
    h_all = _crandn(rng, (n, n_cells, n_users, na))
    v_prime = _crandn(rng, (n, na)) / math.sqrt(a_own)
    if lb.inr > 0:
        h_si = _crandn(rng, (n, na, na)) * math.sqrt(lb.inr)
        precoders = _crandn(rng, (n, na, kd))
    else:
        h_si = np.zeros((n, na, na), dtype=complex)
        precoders = _crandn(rng, (n, na, kd))
    return {"h_all": h_all, "v_prime": v_prime, "h_si": h_si, "precoders": precoders}


def _filters(batch, lb: LinkBudget, k: int) -> np.ndarray:
    """Matched filters for a batch, scaled so E[||w||^2] = N_a."""
    a_own = lb.a_own(k)
    if a_own <= 0:
        raise ValueError("matched filter undefined for zero own-link SNR")
    a_pilot = lb.a_pilot(k)
    d = 1.0 + a_own + float(a_pilot.sum())
    base = batch["h_all"][:, 0, k, :].copy()
    for i, cell in enumerate(lb.pilot_cells):
        base += math.sqrt(a_pilot[i] / a_own) * batch["h_all"][:, cell, k, :]
    base += batch["v_prime"]
    return math.sqrt(a_own / d) * base


def build_matched_filter(real: ChannelRealization, lb: LinkBudget, k: int) -> np.ndarray:
    """Matched filter of user k built from its contaminated estimate."""
    batch = {"h_all": real.h_all[None], "v_prime": real.v_prime[None]}
    return _filters(batch, lb, k)[0]


def sample_aqnm(real: ChannelRealization, lb: LinkBudget, rng, n: int = 1):
    """Draw converter-noise vectors with the realized diagonal covariances.

    Returns (q_u, q_d) of shape (n, N_a); a full-resolution converter
    yields exact zeros.
    """
    na = lb.num_antennas
    au, ad = lb.alpha_u, lb.alpha_d
    dF = np.square(np.abs(real.precoders)).sum(axis=1)          # diag(F F*)
    var_qd = ad * (1.0 - ad) * dF
    q_d = _crandn(rng, (n, na)) * np.sqrt(var_qd)
    c = _adc_input_diag(real, lb)
    q_u = _crandn(rng, (n, na)) * np.sqrt(au * (1.0 - au) * c)
    return q_u, q_d


def _adc_input_diag(real: ChannelRealization, lb: LinkBudget) -> np.ndarray:
    """Noise-normalized diagonal of the ADC input covariance (without alpha factors)."""
    a = lb.a_all()
    rx = np.einsum("lk,lkn->n", a, np.square(np.abs(real.h_all)))
    dF = np.square(np.abs(real.precoders)).sum(axis=1)
    hf = real.h_si @ real.precoders
    ad = lb.alpha_d
    si_part = lb.pu_over_psi * (
        ad**2 * np.square(np.abs(hf)).sum(axis=1)
        + np.square(np.abs(real.h_si)) @ (ad * (1.0 - ad) * dF)
    )
    return rx + si_part + 1.0


@dataclass(frozen=True)
class TermPowers:
    """Mean squared magnitudes of the labeled received-signal terms."""

    desired: float
    est_error: float
    intra_cell: float
    pilot_contam: float
    inter_cell: float
    si_fd: float
    aqnm_aggregate: float
    noise: float

    @property
    def interference(self) -> float:
        return (self.est_error + self.intra_cell + self.pilot_contam
                + self.inter_cell + self.si_fd + self.aqnm_aggregate + self.noise)

    @property
    def empirical_sqinr(self) -> float:
        return self.desired / self.interference


def _batch_terms(batch, lb: LinkBudget, k: int) -> dict:
    """Per-realization conditional term powers (arrays over the batch)."""
    a = lb.a_all()
    au, ad = lb.alpha_u, lb.alpha_d
    w = _filters(batch, lb, k)
    g_all = np.einsum("bn,blkn->blk", w.conj(), batch["h_all"])
    p_all = a[None] * np.square(np.abs(g_all))                   # (b, L, K)
    g_own = g_all[:, 0, k]
    own = p_all[:, 0, k]
    intra = p_all[:, 0, :].sum(axis=1) - own
    pilot = p_all[:, lb.pilot_cells, k].sum(axis=1)
    inter = p_all.sum(axis=(1, 2)) - own - intra - pilot
    w_norm_sq = np.square(np.abs(w)).sum(axis=1)
    out = {
        "g_own": g_own,
        "own_gain": np.square(np.abs(g_own)),
        "intra_cell": au**2 * intra,
        "pilot_contam": au**2 * pilot,
        "inter_cell": au**2 * inter,
        "noise": au**2 * w_norm_sq,
        "w_norm_sq": w_norm_sq,
    }
    if lb.inr > 0:
        g_si = np.einsum("bn,bnm->bm", w.conj(), batch["h_si"])  # w* H_si rows
        hf = np.einsum("bnm,bmk->bnk", batch["h_si"], batch["precoders"])
        wf = np.einsum("bm,bmk->bk", g_si, batch["precoders"])
        dF = np.square(np.abs(batch["precoders"])).sum(axis=2)   # diag(F F*)
        out["si_fd"] = au**2 * ad**2 * np.square(np.abs(wf)).sum(axis=1)
        aqnm_d = au**2 * ad * (1.0 - ad) * (np.square(np.abs(g_si)) * dF).sum(axis=1)
    else:
        zeros = np.zeros(w.shape[0])
        hf = dF = None
        out["si_fd"] = zeros
        aqnm_d = zeros
    if au < 1.0:
        rx = np.einsum("lk,blkn->bn", a, np.square(np.abs(batch["h_all"])))
        c = rx + 1.0
        if lb.inr > 0:
            c = c + lb.pu_over_psi * (
                ad**2 * np.square(np.abs(hf)).sum(axis=2)
                + np.einsum("bnm,bm->bn", np.square(np.abs(batch["h_si"])), ad * (1.0 - ad) * dF)
            )
        aqnm_u = au * (1.0 - au) * (np.square(np.abs(w)) * c).sum(axis=1)
    else:
        aqnm_u = np.zeros(w.shape[0])
    out["aqnm_aggregate"] = aqnm_d + aqnm_u
    return out


def assemble_received_terms(real: ChannelRealization, lb: LinkBudget, k: int) -> TermPowers:
    """Term powers of one realization, symbol/noise/converter averages exact.

    The desired/estimation-error split uses the ensemble filter-channel
    mean sqrt(a_own / d) * N_a implied by the filter construction; the
    fully empirical split over many realizations lives in
    ``empirical_sqinr``.
    """
    batch = {
        "h_all": real.h_all[None], "v_prime": real.v_prime[None],
        "h_si": real.h_si[None], "precoders": real.precoders[None],
    }
    t = _batch_terms(batch, lb, k)
    a_own = lb.a_own(k)
    d = 1.0 + a_own + float(lb.a_pilot(k).sum())
    mean_gain = math.sqrt(a_own / d) * lb.num_antennas
    au = lb.alpha_u
    desired = au**2 * a_own * mean_gain**2
    est_error = au**2 * a_own * abs(t["g_own"][0] - mean_gain) ** 2
    return TermPowers(
        desired=desired,
        est_error=est_error,
        intra_cell=float(t["intra_cell"][0]),
        pilot_contam=float(t["pilot_contam"][0]),
        inter_cell=float(t["inter_cell"][0]),
        si_fd=float(t["si_fd"][0]),
        aqnm_aggregate=float(t["aqnm_aggregate"][0]),
        noise=float(t["noise"][0]),
    )


def sample_term_amplitudes(real: ChannelRealization, lb: LinkBudget, k: int, rng) -> dict:
    """Draw symbols/noise/converter noise and return the eight term amplitudes."""
    a = lb.a_all()
    au, ad = lb.alpha_u, lb.alpha_d
    w = build_matched_filter(real, lb, k)
    s = _crandn(rng, a.shape)
    s_dl = _crandn(rng, lb.num_dl_users)
    v = _crandn(rng, lb.num_antennas)
    q_u, q_d = sample_aqnm(real, lb, rng)
    g_all = np.einsum("n,lkn->lk", w.conj(), real.h_all)
    amp = np.sqrt(a) * g_all * s
    a_own = lb.a_own(k)
    d = 1.0 + a_own + float(lb.a_pilot(k).sum())
    mean_gain = math.sqrt(a_own / d) * lb.num_antennas
    pilot_mask = np.zeros(a.shape, dtype=bool)
    pilot_mask[lb.pilot_cells, k] = True
    intra = amp[0].sum() - amp[0, k]
    si = (w.conj() @ real.h_si @ real.precoders) @ s_dl
    return {
        "desired": au * math.sqrt(a_own) * mean_gain * s[0, k],
        "est_error": au * math.sqrt(a_own) * (g_all[0, k] - mean_gain) * s[0, k],
        "intra_cell": au * intra,
        "pilot_contam": au * amp[pilot_mask].sum(),
        "inter_cell": au * (amp.sum() - amp[0].sum() - amp[pilot_mask].sum()),
        "si_fd": au * ad * si,
        "aqnm_aggregate": au * (w.conj() @ real.h_si @ q_d[0]) + w.conj() @ q_u[0],
        "noise": au * (w.conj() @ v),
    }


@dataclass(frozen=True)
class EmpiricalSqinr:
    sqinr: float
    std_error: float
    terms: TermPowers
    num_realizations: int


def empirical_sqinr(lb: LinkBudget, k: int, num_realizations: int, seed=0,
                    batch_size: int = 256) -> EmpiricalSqinr:
    """Estimate the output SQINR of user k from explicit channel draws.

    The desired/estimation-error split uses the empirical filter-channel
    mean over all realizations.  The reported standard error comes from
    the batch-to-batch spread of the interference estimate.
    """
    if num_realizations < 2 * batch_size:
        batch_size = max(1, num_realizations // 4)
    rng = np.random.default_rng(seed)
    au = lb.alpha_u
    a_own = lb.a_own(k)
    keys = ("intra_cell", "pilot_contam", "inter_cell", "si_fd", "aqnm_aggregate", "noise")
    sums = dict.fromkeys(keys, 0.0)
    g_sum = 0.0 + 0.0j
    g_sq_sum = 0.0
    batch_interf = []
    done = 0
    while done < num_realizations:
        n = min(batch_size, num_realizations - done)
        t = _batch_terms(_draw_batch(lb, k, rng, n), lb, k)
        for key in keys:
            sums[key] += float(t[key].sum())
        g_sum += complex(t["g_own"].sum())
        g_sq_sum += float(t["own_gain"].sum())
        batch_interf.append(
            float(sum(t[key].mean() for key in keys))
            + au**2 * a_own * float(t["own_gain"].mean())
        )
        done += n
    m = num_realizations
    g_mean = g_sum / m
    desired = au**2 * a_own * abs(g_mean) ** 2
    est_error = au**2 * a_own * (g_sq_sum / m - abs(g_mean) ** 2)
    terms = TermPowers(
        desired=desired,
        est_error=est_error,
        **{key: sums[key] / m for key in keys},
    )
    interf = np.array(batch_interf) - desired
    n_batches = len(batch_interf)
    spread = float(interf.std(ddof=1)) / math.sqrt(n_batches) if n_batches > 1 else 0.0
    rel = spread / terms.interference if terms.interference > 0 else 0.0
    return EmpiricalSqinr(
        sqinr=terms.empirical_sqinr,
        std_error=terms.empirical_sqinr * rel,
        terms=terms,
        num_realizations=m,
    )


def filter_moments(lb: LinkBudget, k: int, num_draws: int, seed=0,
                   batch_size: int = 2048) -> dict:
    """Empirical filter moments: E||w||^2, E||w||^4, E|w* h_pilot|^2 per reuse cell."""
    rng = np.random.default_rng(seed)
    n2 = 0.0
    n4 = 0.0
    cross = np.zeros(len(lb.pilot_cells))
    done = 0
    while done < num_draws:
        n = min(batch_size, num_draws - done)
        batch = _draw_batch(lb, k, rng, n)
        w = _filters(batch, lb, k)
        norm_sq = np.square(np.abs(w)).sum(axis=1)
        n2 += float(norm_sq.sum())
        n4 += float(np.square(norm_sq).sum())
        for i, cell in enumerate(lb.pilot_cells):
            g = np.einsum("bn,bn->b", w.conj(), batch["h_all"][:, cell, k, :])
            cross[i] += float(np.square(np.abs(g)).sum())
        done += n
    return {
        "norm_sq": n2 / num_draws,
        "norm_4th": n4 / num_draws,
        "pilot_cross_sq": cross / num_draws,
    }
