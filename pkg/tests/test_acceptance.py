"""Acceptance suite: one test per exit criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; the whole module is also part of the default pytest run.
"""

import dataclasses
import os

import numpy as np
import pytest

from fdmimo.asymptotics import sqinr_limit_many_antennas
from fdmimo.cli import main
from fdmimo.linkbudget import LinkBudget
from fdmimo.montecarlo import run_cdf_experiment, run_hd_baseline, sweep_bits
from fdmimo.oracle import empirical_sqinr, filter_moments
from fdmimo.params import RHO_TABLE, SystemParams, rho_for_bits
from fdmimo.sqinr import sinr_half_duplex, sqinr_hardening, sqinr_perfect_csi
from fdmimo.validate import oracle_budget, random_budget

DROPS = 2000
SEED = 42


def report(name, detail):
    print(f"\nPASS {name}: {detail}")


@pytest.fixture(scope="module")
def params():
    return SystemParams()


@pytest.fixture(scope="module")
def base_report(params):
    return run_cdf_experiment(params, DROPS, SEED)


def test_criterion_1_filter_moments():
    # N_a = 100, two pilot-sharing cells, 1e5 draws, 2% tolerance
    na = 100
    snr = np.array([[100.0], [0.01], [0.01]])
    lb = LinkBudget.synthetic(snr, pilot_cells=[1, 2], num_antennas=na)
    m = filter_moments(lb, 0, 100_000, seed=0)
    checks = {
        "E||w||^2": (m["norm_sq"], float(na)),
        "E||w||^4": (m["norm_4th"], float(na**2 + na)),
        "E|w*h_pilot|^2": (float(m["pilot_cross_sq"][0]), float(na)),
    }
    for name, (value, ref) in checks.items():
        assert value == pytest.approx(ref, rel=0.02), name
    detail = ", ".join(f"{n}={v:.2f}/{r:.0f}" for n, (v, r) in checks.items())
    report("criterion-1 filter moments (2%)", detail)


def test_criterion_2_reduction_identities():
    rng = np.random.default_rng(1234)
    worst_fullres = worst_hd = 0.0
    for _ in range(1000):
        lb = random_budget(rng, alpha_one=True)
        k = int(rng.integers(lb.n_users))
        from fdmimo.asymptotics import sqinr_limit_full_resolution

        s = sqinr_hardening(lb, k).sqinr
        worst_fullres = max(
            worst_fullres,
            abs(s - sqinr_limit_full_resolution(lb, k)) / sqinr_limit_full_resolution(lb, k),
        )
        lb0 = dataclasses.replace(lb, inr=0.0)
        s0 = sqinr_hardening(lb0, k).sqinr
        worst_hd = max(worst_hd, abs(s0 - sinr_half_duplex(lb0, k)) / sinr_half_duplex(lb0, k))
    assert worst_fullres <= 1e-12
    assert worst_hd <= 1e-12
    report(
        "criterion-2 reduction identities (1e-12, 1000 budgets)",
        f"full-res gap {worst_fullres:.2e}, no-SI gap {worst_hd:.2e}",
    )


def test_criterion_3_oracle_equivalence():
    # N_a=128, K=4, two pilot-sharing interferer cells, b=3, K_d=4, moderate INR
    lb = oracle_budget()
    est = empirical_sqinr(lb, 0, 10_000, seed=3)
    ref = sqinr_hardening(lb, 0).sqinr
    gap_fd = abs(est.sqinr - ref) / ref
    assert gap_fd <= 0.10

    lb0 = oracle_budget(alpha=1.0, inr=0.0)
    est0 = empirical_sqinr(lb0, 0, 10_000, seed=4)
    ref0 = sinr_half_duplex(lb0, 0)
    gap_hd = abs(est0.sqinr - ref0) / ref0
    assert gap_hd <= 0.05
    report(
        "criterion-3 oracle equivalence (10%/5%, 1e4 draws)",
        f"FD b=3 gap {gap_fd:.2%}, full-res no-SI gap {gap_hd:.2%}",
    )


def test_criterion_4_limit_probes():
    # own-SNR ceiling of the no-SI full-resolution form
    lb = LinkBudget.synthetic(
        np.array([[1e8, 3.0], [2.0, 1.0]]), pilot_cells=[1], num_antennas=100
    )
    ceiling = sinr_half_duplex(lb, 0)
    gap_ceiling = abs(ceiling - 100.0) / 100.0
    assert gap_ceiling <= 1e-3

    # perfect-CSI high-SNR ceiling, single cell, no SI, b=3
    alpha = 1.0 - RHO_TABLE[3]
    na = 1000
    lb_pc = LinkBudget.synthetic(
        np.array([[1e8]]), num_antennas=na, alpha_u=alpha, alpha_d=alpha
    )
    limit = na / (alpha * (2.0 - alpha))
    gap_pc = abs(sqinr_perfect_csi(lb_pc, 0) - limit) / limit
    assert gap_pc <= 5e-3

    # hardening SQINR at N_a = 1e8 against the many-antennas formula
    lb_ma = LinkBudget.synthetic(
        np.array([[20.0, 4.0], [2.0, 1.0]]), pilot_cells=[1], inr=0.3,
        num_dl_users=4, alpha_u=alpha, alpha_d=alpha, num_antennas=10**8,
    )
    limit_ma = sqinr_limit_many_antennas(lb_ma, 0)
    gap_ma = abs(sqinr_hardening(lb_ma, 0).sqinr - limit_ma) / limit_ma
    assert gap_ma <= 1e-3
    report(
        "criterion-4 limit probes (0.1%/0.5%/0.1%)",
        f"own-SNR {gap_ceiling:.1e}, perfect-CSI {gap_pc:.1e}, many-antennas {gap_ma:.1e}",
    )


def test_criterion_5_resolution_trend_suite(params, base_report):
    bits_list = [1, 2, 3, 4, 5, "full"]
    results = sweep_bits(params, bits_list, DROPS, SEED)
    se = [r.se_effective for _, r in results]
    assert all(b >= a for a, b in zip(se, se[1:])), "SE must be nondecreasing in bits"
    saturation = se[-1] - se[4]
    span = se[-1] - se[0]
    assert saturation <= 0.2 * span, "full-resolution ceiling must be nearly reached at 5 bits"

    r40 = results[2][1]  # b = 3, SI power 40 W (defaults)
    r30 = sweep_bits(params.replace(si_power_w=30.0), [3], DROPS, SEED)[0][1]
    assert r40.se_effective <= r30.se_effective

    hd = run_hd_baseline(params, DROPS, SEED)
    assert r40.se_effective > hd.se_effective, "FD must beat the HD baseline"

    vehicular = params.replace(coherence_tile=2000)
    r_veh = run_cdf_experiment(vehicular, DROPS, SEED)
    assert base_report.se_effective > r_veh.se_effective
    report(
        "criterion-5 resolution/SI/duplex/overhead trends (2000 matched drops)",
        f"SE(b)={['%.3f' % s for s in se]}, 30W {r30.se_effective:.3f} >= 40W "
        f"{r40.se_effective:.3f}, HD {hd.se_effective:.3f}, vehicular {r_veh.se_effective:.3f}",
    )


def _deciles_db(report_):
    return report_.quantile_db(np.arange(0.1, 0.95, 0.1))


def test_criterion_6_cdf_trend_suite(params, base_report):
    base = _deciles_db(base_report)
    eps = 1e-9

    more_dl = run_cdf_experiment(params.replace(users_dl_per_cell=20), DROPS, SEED)
    assert np.all(_deciles_db(more_dl) <= base + eps)

    hot_si = run_cdf_experiment(
        params.replace(si_channel_gain_db=params.si_channel_gain_db + 5.0), DROPS, SEED
    )
    assert np.all(_deciles_db(hot_si) <= base + eps)

    omni = run_cdf_experiment(params.replace(bs_antenna_gain_db=0.0), DROPS, SEED)
    assert np.all(_deciles_db(omni) <= base + eps)

    more_antennas = run_cdf_experiment(params.replace(num_antennas=200), DROPS, SEED)
    assert np.all(_deciles_db(more_antennas) >= base - eps)
    report(
        "criterion-6 CDF orderings at deciles (matched drops)",
        f"median dB: base {base[4]:.2f}, Kd=20 {_deciles_db(more_dl)[4]:.2f}, "
        f"SI+5dB {_deciles_db(hot_si)[4]:.2f}, gain 0 dB {_deciles_db(omni)[4]:.2f}, "
        f"N_a=200 {_deciles_db(more_antennas)[4]:.2f}",
    )


def test_criterion_7_determinism_across_workers(tmp_path):
    blobs = {}
    worker_counts = (1, 4, os.cpu_count() or 1)
    for workers in worker_counts:
        out = tmp_path / f"w{workers}"
        code = main(
            ["simulate-cdf", "--drops", "10000", "--seed", "7", "--threads", str(workers),
             "--out", str(out)]
        )
        assert code == 0
        blobs[workers] = (out / "cdf.csv").read_bytes()
    first = blobs[worker_counts[0]]
    assert all(blob == first for blob in blobs.values())
    report(
        "criterion-7 determinism",
        f"bit-identical cdf.csv for worker counts {worker_counts} (10000 drops)",
    )


def test_criterion_8_quantizer_table():
    expected = {1: 0.3634, 2: 0.1175, 3: 0.03454, 4: 0.009497, 5: 0.002499}
    for bits, rho in expected.items():
        assert rho_for_bits(bits) == rho
    report("criterion-8 quantizer table", "all five tabulated distortion values exact")
