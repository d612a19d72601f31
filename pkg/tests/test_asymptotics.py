import dataclasses
import math

import numpy as np
import pytest

from fdmimo.asymptotics import (
    convergence_probe,
    se_limit_full_resolution,
    se_limit_high_snr,
    se_limit_many_antennas,
    se_limit_power_scaling,
    sqinr_limit_full_resolution,
    sqinr_limit_many_antennas,
)
from fdmimo.linkbudget import LinkBudget
from fdmimo.sqinr import sqinr_hardening
from fdmimo.validate import probe_budget, random_budget


class TestFullResolutionForm:
    def test_identity_on_random_budgets(self):
        rng = np.random.default_rng(19)
        for _ in range(200):
            lb = random_budget(rng, alpha_one=True)
            k = int(rng.integers(lb.n_users))
            assert sqinr_hardening(lb, k).sqinr == pytest.approx(
                sqinr_limit_full_resolution(lb, k), rel=1e-12
            )

    def test_worked_value(self):
        lb = LinkBudget.synthetic(np.array([[10.0]]), num_antennas=100)
        assert se_limit_full_resolution(lb, 0) == pytest.approx(
            math.log2(1 + 82.6446), abs=1e-3
        )

    def test_all_zero_snr(self):
        lb = LinkBudget.synthetic(np.array([[0.0, 0.0]]))
        assert se_limit_full_resolution(lb, 0) == 0.0


class TestHighSnrCeiling:
    def test_ideal_converter(self):
        assert se_limit_high_snr(100, 1.0) == pytest.approx(math.log2(101.0), rel=1e-12)
        assert se_limit_high_snr(100, 1.0) == pytest.approx(6.6582, abs=1e-4)

    def test_three_bit_converter(self):
        assert se_limit_high_snr(100, 1.0 - 0.03454) == pytest.approx(6.660, abs=1e-3)

    def test_quantization_raises_the_expression(self):
        # alpha(2 - alpha) < 1 for alpha < 1
        for alpha in (0.6366, 0.8825, 0.96546):
            assert se_limit_high_snr(100, alpha) > se_limit_high_snr(100, 1.0)


class TestPowerScalingForm:
    def test_unit_energy_no_si(self):
        assert se_limit_power_scaling(1.0, 1.0, 1.0, 10, 0.0) == pytest.approx(1.0)

    def test_worked_value(self):
        assert se_limit_power_scaling(10.0, 1.0, 1.0, 10, 1.0) == pytest.approx(
            math.log2(1 + 100 / 11), abs=1e-3
        )

    def test_zero_energy(self):
        assert se_limit_power_scaling(0.0, 0.9, 0.9, 10, 1.0) == 0.0


class TestManyAntennasForm:
    def budget(self):
        return LinkBudget.synthetic(
            np.array([[20.0, 4.0], [2.0, 1.0]]),
            pilot_cells=[1],
            inr=0.3,
            num_dl_users=4,
            num_antennas=100,
            alpha_u=0.96546,
            alpha_d=0.96546,
        )

    def test_matches_hardening_at_huge_antenna_count(self):
        lb = self.budget()
        limit = sqinr_limit_many_antennas(lb, 0)
        driven = sqinr_hardening(dataclasses.replace(lb, num_antennas=10**8), 0).sqinr
        assert driven == pytest.approx(limit, rel=1e-3)

    def test_unbounded_without_contamination_or_si(self):
        lb = LinkBudget.synthetic(np.array([[5.0, 1.0]]), inr=0.0)
        assert math.isinf(sqinr_limit_many_antennas(lb, 0))
        assert math.isinf(se_limit_many_antennas(lb, 0))

    def test_ideal_converter_denominator(self):
        lb = dataclasses.replace(self.budget(), alpha_u=1.0, alpha_d=1.0)
        a_own = lb.a_own(0)
        ap = lb.a_pilot(0)
        d = 1 + a_own + ap.sum()
        expected = (a_own**2 / d) / (float(np.square(ap).sum()) / d + lb.num_dl_users * lb.inr)
        assert sqinr_limit_many_antennas(lb, 0) == pytest.approx(expected, rel=1e-12)


class TestProbes:
    def test_own_snr_ceiling(self):
        lb = LinkBudget.synthetic(
            np.array([[10.0, 2.0], [1.0, 0.5]]), pilot_cells=[1], num_antennas=100
        )
        report = convergence_probe("own_snr_ceiling", lb, 0)
        assert report.assertable and report.converged
        assert report.relative_gap < 1e-3
        assert report.limit_value == 100.0

    def test_high_snr_probe(self):
        report = convergence_probe("high_snr", probe_budget(num_antennas=1000), 0)
        assert report.assertable and report.converged
        assert report.relative_gap < 5e-3

    def test_full_resolution_probe_exact(self):
        report = convergence_probe("full_resolution", random_budget(np.random.default_rng(1)), 0)
        assert report.converged
        assert report.relative_gap < 1e-12

    def test_many_antennas_probe(self):
        lb = LinkBudget.synthetic(
            np.array([[20.0, 4.0], [2.0, 1.0]]), pilot_cells=[1], inr=0.3,
            num_dl_users=4, alpha_u=0.96546, alpha_d=0.96546,
        )
        report = convergence_probe("many_antennas", lb, 0)
        assert report.converged and report.relative_gap < 1e-3

    def test_power_scaling_report_only(self):
        lb = LinkBudget.synthetic(
            np.array([[5.0]]), inr=0.5, num_dl_users=4, alpha_u=0.9, alpha_d=0.9
        )
        report = convergence_probe("power_scaling", lb, 0)
        assert not report.assertable
        assert not report.converged

    def test_gap_sequence_eventually_decreasing(self):
        lb = LinkBudget.synthetic(
            np.array([[10.0, 2.0], [1.0, 0.5]]), pilot_cells=[1], num_antennas=100
        )
        report = convergence_probe("own_snr_ceiling", lb, 0)
        gaps = [abs(v - report.limit_value) / report.limit_value
                for _, v in report.probe_values]
        tail = gaps[-4:]
        assert all(g2 < g1 for g1, g2 in zip(tail, tail[1:]))

    def test_unknown_limit_id(self):
        with pytest.raises(KeyError):
            convergence_probe("nope", probe_budget(), 0)
