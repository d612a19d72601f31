"""System parameters, quantizer model, and derived scalar quantities.

All dB <-> linear conversions in this package go through ``db_to_linear``
and ``linear_to_db`` (power quantities): linear = 10**(dB/10) and
dB = 10*log10(linear).  Powers configured in watts are converted to dBm
with +30 dB.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass
from typing import Any


class InvalidConfigError(ValueError):
    """Raised when a configuration value violates a model constraint."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


def db_to_linear(x_db):
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x):
    return 10.0 * math.log10(x)


# Distortion factor rho = 1 - alpha of an optimal scalar quantizer driven by
# a Gaussian input, per number of bits.  Beyond the tabulated range the
# asymptotic tail (pi*sqrt(3)/2) * 2**(-2b) is used.
RHO_TABLE = {
    1: 0.3634,
    2: 0.1175,
    3: 0.03454,
    4: 0.009497,
    5: 0.002499,
}

RHO_TAIL_COEFF = math.pi * math.sqrt(3.0) / 2.0

FULL_RESOLUTION = "full"


def rho_for_bits(bits) -> float:
    """Quantizer distortion factor rho for a b-bit converter.

    ``bits`` may be a positive integer or the string ``"full"`` for an
    ideal converter (rho = 0).  Tabulated values are returned for
    b in 1..5; the 2**(-2b) tail is used above.
    """
    if bits == FULL_RESOLUTION:
        return 0.0
    b = int(bits)
    if b != bits or b < 1:
        raise InvalidConfigError("bits", f"need a positive integer or 'full', got {bits!r}")
    if b in RHO_TABLE:
        return RHO_TABLE[b]
    return RHO_TAIL_COEFF * 2.0 ** (-2 * b)


@dataclass(frozen=True)
class Quantizer:
    """AQNM converter model: gain alpha = 1 - rho applied to the signal."""

    bits: Any
    rho: float
    alpha: float

    @classmethod
    def for_bits(cls, bits) -> "Quantizer":
        rho = rho_for_bits(bits)
        return cls(bits=bits, rho=rho, alpha=1.0 - rho)

    @property
    def is_full_resolution(self) -> bool:
        return self.rho == 0.0


# Config keys accepted in files / environment / CLI overrides, with parsers.
def _parse_bits(v):
    if v == FULL_RESOLUTION:
        return FULL_RESOLUTION
    return int(v)


def _parse_power_control(v):
    if isinstance(v, str):
        v = json.loads(v)
    if isinstance(v, (list, tuple)):
        return tuple(float(x) for x in v)
    return float(v)


def _parse_bool(v):
    if isinstance(v, str):
        if v.lower() in ("1", "true", "yes", "on"):
            return True
        if v.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {v!r}")
    return bool(v)


CONFIG_PARSERS = {
    "bandwidth_hz": float,
    "pathloss_exponent": float,
    "shadowing_sigma_db": float,
    "uplink_power_w": float,
    "si_power_w": float,
    "si_channel_gain_db": float,
    "noise_psd_dbm_hz": float,
    "noise_figure_db": float,
    "bs_antenna_gain_db": float,
    "num_antennas": int,
    "users_ul_per_cell": int,
    "users_dl_per_cell": int,
    "pilots_per_cell": int,
    "overhead_fraction": float,
    "coherence_tile": int,
    "adc_bits": _parse_bits,
    "dac_bits": _parse_bits,
    "inter_site_distance_m": float,
    "min_ue_bs_distance_m": float,
    "pathloss_intercept_db": float,
    "power_control": _parse_power_control,
    "tiers": int,
    "reuse_factor": int,
    "wraparound": _parse_bool,
}

ENV_PREFIX = "FDMIMO_"


@dataclass(frozen=True)
class SystemParams:
    """All simulation parameters, immutable after construction.

    Note on the SI channel default: the per-entry SI channel gain is chosen
    so that the loopback interference-to-noise ratio P_SI * mu_SI^2 / sigma^2
    lands at ~10 dB for the default transmit powers and noise figure, the
    regime in which the reverse link stays usable.  Raw channel gains of any
    magnitude are accepted.
    """

    bandwidth_hz: float = 20e6
    pathloss_exponent: float = 4.0
    shadowing_sigma_db: float = 8.0
    uplink_power_w: float = 0.2
    si_power_w: float = 40.0
    si_channel_gain_db: float = -134.0
    noise_psd_dbm_hz: float = -174.0
    noise_figure_db: float = 3.0
    bs_antenna_gain_db: float = 30.0
    num_antennas: int = 100
    users_ul_per_cell: int = 10
    users_dl_per_cell: int = 10
    pilots_per_cell: int = 30
    overhead_fraction: float = 0.5
    coherence_tile: int = 20000
    adc_bits: Any = 3
    dac_bits: Any = 3
    inter_site_distance_m: float = 500.0
    min_ue_bs_distance_m: float = 10.0
    pathloss_intercept_db: float = -38.46
    power_control: Any = 1.0
    tiers: int = 2
    reuse_factor: int = 3
    wraparound: bool = True

    def __post_init__(self):
        if self.pathloss_exponent <= 2.0:
            raise InvalidConfigError(
                "pathloss_exponent", f"pathloss exponent must be > 2, got {self.pathloss_exponent}"
            )
        if self.shadowing_sigma_db < 0:
            raise InvalidConfigError("shadowing_sigma_db", "must be >= 0")
        for key in ("bandwidth_hz", "uplink_power_w", "si_power_w", "inter_site_distance_m",
                    "min_ue_bs_distance_m"):
            if getattr(self, key) <= 0:
                raise InvalidConfigError(key, "must be > 0")
        for key in ("num_antennas", "users_ul_per_cell", "users_dl_per_cell",
                    "pilots_per_cell", "coherence_tile"):
            if getattr(self, key) < 1:
                raise InvalidConfigError(key, "must be a positive integer")
        if not 0.0 <= self.overhead_fraction <= 1.0:
            raise InvalidConfigError("overhead_fraction", "must lie in [0, 1]")
        if self.overhead_fraction * self.pilots_per_cell / self.coherence_tile >= 1.0:
            raise InvalidConfigError(
                "coherence_tile",
                "pilot overhead overhead_fraction * pilots_per_cell / coherence_tile must be < 1",
            )
        if self.pilots_per_cell < self.users_ul_per_cell:
            raise InvalidConfigError("pilots_per_cell", "need at least one pilot per uplink user")
        if self.tiers not in (0, 1, 2):
            raise InvalidConfigError("tiers", "supported tier counts are 0, 1, 2")
        if self.reuse_factor not in (1, 3):
            raise InvalidConfigError("reuse_factor", "supported pilot reuse factors are 1 and 3")
        rho_for_bits(self.adc_bits)
        rho_for_bits(self.dac_bits)
        for r in self.power_ratios():
            if not 0.0 < r <= 1.0:
                raise InvalidConfigError("power_control", f"ratios must lie in (0, 1], got {r}")

    # -- derived quantities -------------------------------------------------

    def power_ratios(self) -> tuple:
        """Per-user transmit power ratios P_k / P_u, one per uplink user."""
        k = self.users_ul_per_cell
        if isinstance(self.power_control, tuple):
            if len(self.power_control) != k:
                raise InvalidConfigError(
                    "power_control", f"need {k} per-user ratios, got {len(self.power_control)}"
                )
            return self.power_control
        return (float(self.power_control),) * k

    def noise_power_dbm(self) -> float:
        """Receiver noise power: PSD + 10*log10(bandwidth) + noise figure."""
        return self.noise_psd_dbm_hz + linear_to_db(self.bandwidth_hz) + self.noise_figure_db

    def noise_power_w(self) -> float:
        return db_to_linear(self.noise_power_dbm() - 30.0)

    def inr(self) -> float:
        """Loopback SI interference-to-noise ratio P_SI * mu_SI^2 / sigma^2 (linear)."""
        return self.si_power_w * db_to_linear(self.si_channel_gain_db) / self.noise_power_w()

    def uplink_quantizer(self) -> Quantizer:
        return Quantizer.for_bits(self.adc_bits)

    def downlink_quantizer(self) -> Quantizer:
        return Quantizer.for_bits(self.dac_bits)

    def overhead_factor(self) -> float:
        return 1.0 - self.overhead_fraction * self.pilots_per_cell / self.coherence_tile

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if isinstance(d["power_control"], tuple):
            d["power_control"] = list(d["power_control"])
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SystemParams":
        clean = {}
        for key, value in data.items():
            if key not in CONFIG_PARSERS:
                raise InvalidConfigError(key, "unknown configuration key")
            try:
                clean[key] = CONFIG_PARSERS[key](value)
            except InvalidConfigError:
                raise
            except (TypeError, ValueError) as exc:
                raise InvalidConfigError(key, f"cannot parse {value!r} ({exc})") from exc
        return cls(**clean)

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def load_params(config_path=None, env=None, overrides=None) -> SystemParams:
    """Build SystemParams from defaults <- config file <- environment <- overrides.

    Environment variables use the ``FDMIMO_`` prefix with upper-cased key
    names, e.g. ``FDMIMO_NUM_ANTENNAS=128``.
    """
    data: dict = {}
    if config_path is not None:
        with open(config_path) as fh:
            try:
                file_data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidConfigError("<file>", f"{config_path} is not valid JSON: {exc}") from exc
        if not isinstance(file_data, dict):
            raise InvalidConfigError("<file>", f"{config_path} must hold a JSON object")
        data.update(file_data)
    env = os.environ if env is None else env
    for key in CONFIG_PARSERS:
        env_key = ENV_PREFIX + key.upper()
        if env_key in env:
            data[key] = env[env_key]
    if overrides:
        for key, value in overrides.items():
            if value is not None:
                data[key] = value
    return SystemParams.from_dict(data)
