"""Reverse-link simulator for full-duplex massive-MIMO cellular networks
with low-resolution ADC/DACs."""

__version__ = "0.1.0"

from .params import Quantizer, SystemParams, load_params, rho_for_bits
from .geometry import CellLattice, NetworkDrop, build_lattice, drop_users, pilot_reuse_set
from .linkbudget import LinkBudget, assemble_link_budget, large_scale_gain, snr_of_link
from .sqinr import (
    SqinrBreakdown,
    se_of_mean_ratio,
    sinr_half_duplex,
    sinr_no_contamination,
    sqinr_hardening,
    sqinr_perfect_csi,
)
from .asymptotics import LimitReport, convergence_probe
from .montecarlo import SqinrReport, effective_se, run_cdf_experiment, run_hd_baseline, sweep_bits
from .oracle import ChannelRealization, TermPowers, empirical_sqinr

__all__ = [
    "Quantizer", "SystemParams", "load_params", "rho_for_bits",
    "CellLattice", "NetworkDrop", "build_lattice", "drop_users", "pilot_reuse_set",
    "LinkBudget", "assemble_link_budget", "large_scale_gain", "snr_of_link",
    "SqinrBreakdown", "se_of_mean_ratio", "sinr_half_duplex", "sinr_no_contamination",
    "sqinr_hardening", "sqinr_perfect_csi",
    "LimitReport", "convergence_probe",
    "SqinrReport", "effective_se", "run_cdf_experiment", "run_hd_baseline", "sweep_bits",
    "ChannelRealization", "TermPowers", "empirical_sqinr",
]
