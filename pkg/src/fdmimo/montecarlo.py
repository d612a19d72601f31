"""Monte Carlo driver: drops -> budgets -> closed-form SQINR -> CDF and SE.

Per drop, the SQINRs of the cell-of-interest uplink users are averaged
(arithmetic mean of linear values); the CDF is taken over drops and the
drop-level spectral efficiency is log2(1 + average SQINR), averaged over
drops.  Every drop derives its generator from (master seed, drop index)
only, so reports are bit-identical for any worker count.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geometry import build_lattice, drop_users, pilot_reuse_set
from .kernels import hardening_sqinr_users
from .linkbudget import assemble_link_budget
from .params import SystemParams


def effective_se(gross_se: float, overhead_fraction: float, pilots_per_cell: int,
                 coherence_tile: int) -> float:
    """Discount the gross SE by the reverse-link share of the pilot overhead."""
    overhead = overhead_fraction * pilots_per_cell / coherence_tile
    if overhead >= 1.0:
        raise ValueError("pilot overhead must be < 1")
    return (1.0 - overhead) * gross_se


def ecdf(values_db: np.ndarray) -> np.ndarray:
    """Empirical CDF as (value_db, probability) rows, probability in (0, 1]."""
    x = np.sort(np.asarray(values_db, dtype=float))
    p = np.arange(1, x.size + 1) / x.size
    return np.column_stack([x, p])


@dataclass(frozen=True)
class SqinrReport:
    per_drop_cell_avg: np.ndarray   # linear SQINR, one entry per drop
    cdf: np.ndarray                 # (num_drops, 2): sqinr_db, probability
    se_gross: float                 # bits/s/Hz, mean over drops
    se_effective: float
    params: SystemParams
    num_drops: int
    seed: int
    prelog: float = 1.0

    def quantile_db(self, q) -> np.ndarray:
        return np.quantile(10.0 * np.log10(self.per_drop_cell_avg), q)


# -- deterministic budget collection -----------------------------------------

def _drop_budget_matrix(params: SystemParams, lattice, master_seed: int, drop_index: int):
    seed = np.random.SeedSequence((master_seed, drop_index))
    drop = drop_users(lattice, params, seed)
    return assemble_link_budget(drop, params).a_all()


def _budget_worker(args):
    params, master_seed, start, stop = args
    lattice = build_lattice(
        params.inter_site_distance_m, params.wraparound, params.tiers, params.reuse_factor
    )
    out = np.empty((stop - start, lattice.n_cells, params.users_ul_per_cell))
    for i in range(start, stop):
        out[i - start] = _drop_budget_matrix(params, lattice, master_seed, i)
    return start, out


def collect_budgets(params: SystemParams, num_drops: int, seed: int, workers: int = 1):
    """Power-ratio weighted SNR matrices for num_drops independent drops.

    Returns (budgets, pilot_cells) with budgets of shape (num_drops,
    n_cells, K).  The result is a pure function of (params, num_drops,
    seed) regardless of the worker count.
    """
    if num_drops < 1:
        raise ValueError("num_drops must be >= 1")
    lattice = build_lattice(
        params.inter_site_distance_m, params.wraparound, params.tiers, params.reuse_factor
    )
    pilot_cells = pilot_reuse_set(lattice)
    if workers <= 1 or num_drops < 2 * workers:
        _, budgets = _budget_worker((params, seed, 0, num_drops))
        return budgets, pilot_cells
    bounds = np.linspace(0, num_drops, workers * 4 + 1, dtype=int)
    jobs = [
        (params, seed, int(a), int(b))
        for a, b in zip(bounds[:-1], bounds[1:])
        if b > a
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = sorted(pool.map(_budget_worker, jobs), key=lambda t: t[0])
    return np.concatenate([p[1] for p in parts]), pilot_cells


def _cell_averages(budgets, pilot_cells, params: SystemParams, inr: float):
    na = float(params.num_antennas)
    kd = float(params.users_dl_per_cell)
    au = params.uplink_quantizer().alpha
    ad = params.downlink_quantizer().alpha
    out = np.empty(budgets.shape[0])
    for i in range(budgets.shape[0]):
        vals = hardening_sqinr_users(budgets[i], pilot_cells, na, kd, au, ad, inr)
        out[i] = vals.mean()
    return out


def _report(params, cell_avg, num_drops, seed, prelog=1.0) -> SqinrReport:
    se_per_drop = np.log2(1.0 + cell_avg)
    se_gross = prelog * float(se_per_drop.mean())
    return SqinrReport(
        per_drop_cell_avg=cell_avg,
        cdf=ecdf(10.0 * np.log10(cell_avg)),
        se_gross=se_gross,
        se_effective=effective_se(
            se_gross, params.overhead_fraction, params.pilots_per_cell, params.coherence_tile
        ),
        params=params,
        num_drops=num_drops,
        seed=seed,
        prelog=prelog,
    )


# -- experiments --------------------------------------------------------------

def run_cdf_experiment(params: SystemParams, num_drops: int, seed: int,
                       workers: int = 1) -> SqinrReport:
    """Full-duplex CDF/SE experiment over num_drops independent drops."""
    budgets, pilot_cells = collect_budgets(params, num_drops, seed, workers)
    cell_avg = _cell_averages(budgets, pilot_cells, params, params.inr())
    return _report(params, cell_avg, num_drops, seed)


def run_hd_baseline(params: SystemParams, num_drops: int, seed: int,
                    workers: int = 1, prelog: float = 0.5) -> SqinrReport:
    """Half-duplex baseline: SI loop silenced, SE scaled by the duplexing prelog.

    Quantization is retained at the configured resolution.
    """
    budgets, pilot_cells = collect_budgets(params, num_drops, seed, workers)
    cell_avg = _cell_averages(budgets, pilot_cells, params, 0.0)
    return _report(params, cell_avg, num_drops, seed, prelog=prelog)


def sweep_bits(params: SystemParams, bits_list, num_drops: int, seed: int,
               workers: int = 1) -> list:
    """Evaluate matched drops under several converter resolutions.

    The same drops (hence budgets) are reused for every entry of
    bits_list, so the curves differ only through quantization.  Returns
    [(bits, SqinrReport), ...] in the given order.
    """
    if not bits_list:
        raise ValueError("bits_list must not be empty")
    budgets, pilot_cells = collect_budgets(params, num_drops, seed, workers)
    inr = params.inr()
    results = []
    for bits in bits_list:
        p = params.replace(adc_bits=bits, dac_bits=bits)
        cell_avg = _cell_averages(budgets, pilot_cells, p, inr)
        results.append((bits, _report(p, cell_avg, num_drops, seed)))
    return results


# -- CSV output ---------------------------------------------------------------

def write_cdf_csv(report: SqinrReport, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sqinr_db", "cdf"])
        for value, prob in report.cdf:
            writer.writerow([repr(float(value)), repr(float(prob))])


def write_sweep_csv(results, path) -> None:
    """One row per resolution: SE plus 5/50/95 SQINR percentiles in dB."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["bits", "se_gross", "se_effective", "sqinr_db_p5", "sqinr_db_p50", "sqinr_db_p95"]
        )
        for bits, report in results:
            p5, p50, p95 = report.quantile_db([0.05, 0.50, 0.95])
            writer.writerow(
                [bits, repr(report.se_gross), repr(report.se_effective),
                 repr(float(p5)), repr(float(p50)), repr(float(p95))]
            )
