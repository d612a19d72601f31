import dataclasses
import math

import numpy as np
import pytest

from fdmimo.linkbudget import LinkBudget
from fdmimo.oracle import (
    assemble_received_terms,
    build_matched_filter,
    draw_realization,
    empirical_sqinr,
    filter_moments,
    sample_aqnm,
    sample_term_amplitudes,
)
from fdmimo.sqinr import sinr_half_duplex, sqinr_hardening
from fdmimo.validate import _moment_budget, oracle_budget


class TestFilterMoments:
    def test_second_and_fourth_moments(self):
        lb = _moment_budget()
        m = filter_moments(lb, 0, 20_000, seed=0)
        assert m["norm_sq"] == pytest.approx(100.0, rel=0.03)
        assert m["norm_4th"] == pytest.approx(100**2 + 100, rel=0.03)

    def test_pilot_cross_moment(self):
        lb = _moment_budget()
        m = filter_moments(lb, 0, 20_000, seed=1)
        assert m["pilot_cross_sq"] == pytest.approx([100.0, 100.0], rel=0.03)

    def test_independent_channel_cross_moment(self):
        # a channel that never enters the filter has E|w*h|^2 = E||w||^2
        lb = LinkBudget.synthetic(
            np.array([[50.0, 1.0], [2.0, 1.0]]), pilot_cells=[], num_antennas=64
        )
        rng = np.random.default_rng(2)
        acc = 0.0
        n = 4000
        for _ in range(n):
            real = draw_realization(lb, 0, rng)
            w = build_matched_filter(real, lb, 0)
            acc += abs(np.vdot(w, real.h_all[1, 0])) ** 2
        assert acc / n == pytest.approx(64.0, rel=0.1)

    def test_zero_own_snr_rejected(self):
        lb = LinkBudget.synthetic(np.array([[0.0]]))
        with pytest.raises(ValueError, match="own-link"):
            draw_realization(lb, 0, np.random.default_rng(0))


class TestSampleAqnm:
    def budget(self, alpha=0.8):
        return LinkBudget.synthetic(
            np.array([[4.0, 2.0]]), inr=0.5, num_dl_users=3, num_antennas=16,
            alpha_u=alpha, alpha_d=alpha,
        )

    def test_full_resolution_is_exactly_zero(self):
        lb = self.budget(alpha=1.0)
        real = draw_realization(lb, 0, np.random.default_rng(0))
        q_u, q_d = sample_aqnm(real, lb, np.random.default_rng(1), n=10)
        assert np.all(q_u == 0)
        assert np.all(q_d == 0)

    def test_downlink_covariance_diagonal(self):
        lb = self.budget()
        real = draw_realization(lb, 0, np.random.default_rng(3))
        _, q_d = sample_aqnm(real, lb, np.random.default_rng(4), n=100_000)
        emp = (q_d.conj().T @ q_d) / q_d.shape[0]
        dF = np.square(np.abs(real.precoders)).sum(axis=1)
        expected = lb.alpha_d * (1 - lb.alpha_d) * dF
        assert np.diag(emp).real == pytest.approx(expected, rel=0.03)
        off = emp - np.diag(np.diag(emp))
        assert np.abs(off).max() < 0.05 * expected.mean()

    def test_uplink_covariance_diagonal(self):
        lb = self.budget()
        real = draw_realization(lb, 0, np.random.default_rng(5))
        q_u, _ = sample_aqnm(real, lb, np.random.default_rng(6), n=100_000)
        emp = (q_u.conj().T @ q_u) / q_u.shape[0]
        off = emp - np.diag(np.diag(emp))
        assert np.abs(off).max() < 0.05 * np.diag(emp).real.mean()


class TestReceivedTerms:
    def test_perfect_csi_zeroes_nuisance_terms(self):
        lb = LinkBudget.synthetic(np.array([[20.0]]), inr=0.0, num_antennas=128)
        rng = np.random.default_rng(7)
        real = draw_realization(lb, 0, rng)
        real = dataclasses.replace(real, v_prime=np.zeros_like(real.v_prime))
        t = assemble_received_terms(real, lb, 0)
        assert t.pilot_contam == 0.0
        assert t.si_fd == 0.0
        assert t.aqnm_aggregate == 0.0
        assert t.est_error < 0.05 * t.desired  # hardening residue ~ 1/N_a

    def test_desired_power_matches_hardening_numerator(self):
        lb = oracle_budget()
        est = empirical_sqinr(lb, 0, 3000, seed=8)
        predicted = sqinr_hardening(lb, 0).numerator
        assert est.terms.desired == pytest.approx(predicted, rel=0.10)

    def test_si_power_linear_in_dl_users(self):
        lb5 = dataclasses.replace(oracle_budget(), num_dl_users=5)
        lb10 = dataclasses.replace(oracle_budget(), num_dl_users=10)
        t5 = empirical_sqinr(lb5, 0, 3000, seed=9).terms
        t10 = empirical_sqinr(lb10, 0, 3000, seed=9).terms
        assert t10.si_fd / t5.si_fd == pytest.approx(2.0, rel=0.1)

    def test_term_cross_correlations_vanish(self):
        lb = LinkBudget.synthetic(
            np.array([[8.0, 3.0], [1.0, 0.5]]), pilot_cells=[1], inr=0.4,
            num_dl_users=3, num_antennas=32, alpha_u=0.8825, alpha_d=0.8825,
        )
        rng = np.random.default_rng(10)
        n = 3000
        names = ["est_error", "intra_cell", "pilot_contam", "inter_cell",
                 "si_fd", "aqnm_aggregate", "noise"]
        samples = {name: np.empty(n, dtype=complex) for name in ["desired"] + names}
        for i in range(n):
            real = draw_realization(lb, 0, rng)
            amps = sample_term_amplitudes(real, lb, 0, rng)
            for name in samples:
                samples[name][i] = amps[name]
        d = samples["desired"]
        d = (d - d.mean()) / d.std()
        for name in names:
            x = samples[name]
            x = (x - x.mean()) / x.std()
            corr = abs(np.mean(d.conj() * x))
            assert corr < 4.0 / math.sqrt(n), name


class TestEmpiricalSqinr:
    def test_matches_hardening_form(self):
        lb = oracle_budget()
        est = empirical_sqinr(lb, 0, 3000, seed=11)
        ref = sqinr_hardening(lb, 0).sqinr
        assert est.sqinr == pytest.approx(ref, rel=0.15)
        assert est.std_error < 0.05 * est.sqinr

    def test_matches_half_duplex_form_at_full_resolution(self):
        lb = oracle_budget(alpha=1.0, inr=0.0)
        est = empirical_sqinr(lb, 0, 3000, seed=12)
        assert est.sqinr == pytest.approx(sinr_half_duplex(lb, 0), rel=0.08)

    def test_hardening_residue_shrinks_with_antennas(self):
        # estimation-error-to-desired ratio scales as 1/N_a
        lb128 = oracle_budget()
        lb512 = dataclasses.replace(lb128, num_antennas=512)
        r128 = empirical_sqinr(lb128, 0, 2000, seed=13).terms
        r512 = empirical_sqinr(lb512, 0, 2000, seed=13).terms
        assert r512.est_error / r512.desired < r128.est_error / r128.desired

    def test_terms_property(self):
        lb = oracle_budget()
        est = empirical_sqinr(lb, 0, 1000, seed=14)
        assert est.terms.empirical_sqinr == pytest.approx(est.sqinr, rel=1e-12)
        assert est.num_realizations == 1000
