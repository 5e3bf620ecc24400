"""Scenario parameters: ingestion, unit conversion and validation.

Everything downstream of this module works in SI units: meters, watts,
hertz, bits, seconds, and densities per square meter.  Configuration files
use field-friendly units (dBm, dB, per km2) and are converted exactly once,
here.  Path loss is pure x**(-alpha) with x in meters; no reference-distance
constant is applied, so absolute SINR values are only meaningful relative to
the Monte Carlo validator, which uses the same convention.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class ConfigError(ValueError):
    """Raised for unknown keys, bad values, or violated scenario invariants."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class BackhaulMode(Enum):
    # Backhaul delay charged only when the uplink and downlink base
    # stations differ, or unconditionally in every decoupled case.
    CROSS_TIER_ONLY = "cross_tier_only"
    ALWAYS = "always"


def dbm_to_watts(x: float) -> float:
    """Convert a power in dBm to watts: 10**((x - 30) / 10)."""
    return 10.0 ** ((x - 30.0) / 10.0)


def watts_to_dbm(w: float) -> float:
    if w <= 0.0:
        raise ValueError(f"power must be positive to express in dBm, got {w}")
    return 10.0 * math.log10(w) + 30.0


def db_to_linear(x: float) -> float:
    return 10.0 ** (x / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0.0:
        raise ValueError(f"ratio must be positive to express in dB, got {x}")
    return 10.0 * math.log10(x)


PER_KM2 = 1.0e-6  # one BS (or user) per km2, expressed per m2


@dataclass(frozen=True)
class TierParams:
    """One base-station tier: spatial density, transmit power, compute."""

    density: float            # BS per square meter
    tx_power: float           # watts
    cloudlet_capacity: float  # CPU cycles per second

    def __post_init__(self):
        if self.density < 0.0:
            raise ValueError(f"tier density must be >= 0, got {self.density}")
        if self.tx_power <= 0.0:
            raise ValueError(f"tier tx_power must be > 0, got {self.tx_power}")
        if self.cloudlet_capacity <= 0.0:
            raise ValueError(
                f"tier cloudlet_capacity must be > 0, got {self.cloudlet_capacity}"
            )


@dataclass(frozen=True)
class ScenarioParams:
    """Validated scenario in SI units; immutable, safe to share across threads.

    The number of CPU cycles per offloaded request is configured as
    cycles_per_input_bit so that sweeps over input_bits rescale the request
    size automatically (see :attr:`cycles_per_request`).
    """

    macro: TierParams
    small: TierParams
    user_density: float        # MU per square meter
    user_tx_power: float       # watts
    ul_bandwidth: float        # Hz
    dl_bandwidth: float        # Hz
    noise_power: float         # watts
    pathloss_exponent: float   # must be exactly 4 (closed forms below need it)
    input_bits: float          # bits uploaded per request
    output_bits: float         # bits returned per request
    cycles_per_input_bit: float
    backhaul_capacity: float   # bits per second
    ul_sinr_threshold: float   # linear ratio
    dl_sinr_threshold: float   # linear ratio
    backhaul_mode: BackhaulMode = BackhaulMode.CROSS_TIER_ONLY

    def __post_init__(self):
        if self.macro.density <= 0.0:
            raise ValueError("macro tier density must be > 0")
        positive = {
            "user_density": self.user_density,
            "user_tx_power": self.user_tx_power,
            "ul_bandwidth": self.ul_bandwidth,
            "dl_bandwidth": self.dl_bandwidth,
            "noise_power": self.noise_power,
            "input_bits": self.input_bits,
            "output_bits": self.output_bits,
            "cycles_per_input_bit": self.cycles_per_input_bit,
            "backhaul_capacity": self.backhaul_capacity,
            "ul_sinr_threshold": self.ul_sinr_threshold,
            "dl_sinr_threshold": self.dl_sinr_threshold,
        }
        for name, value in positive.items():
            if not (value > 0.0) or not math.isfinite(value):
                raise ValueError(f"{name} must be positive and finite, got {value}")
        if self.pathloss_exponent != 4.0:
            raise ValueError(
                "pathloss_exponent must be exactly 4; the interference factor "
                "sqrt(g)*arctan(sqrt(g)) used by the coverage integrals is "
                f"specific to that exponent (got {self.pathloss_exponent})"
            )
        total_bs = self.macro.density + self.small.density
        if self.user_density < total_bs:
            raise ValueError(
                "user_density must be at least the total BS density so the "
                "active-uplink thinning probability (lambda_m + lambda_s) / "
                f"lambda_u stays <= 1 (got {self.user_density} < {total_bs})"
            )
        if self.macro.cloudlet_capacity < self.small.cloudlet_capacity:
            raise ValueError(
                "macro cloudlet_capacity must be >= small cloudlet_capacity "
                f"(got {self.macro.cloudlet_capacity} < {self.small.cloudlet_capacity})"
            )
        if self.macro.tx_power < self.small.tx_power:
            raise ValueError(
                "macro tx_power must be >= small tx_power; the zero "
                "probability of the (macro uplink, small downlink) "
                "association case relies on it "
                f"(got {self.macro.tx_power} < {self.small.tx_power})"
            )

    @property
    def cycles_per_request(self) -> float:
        """CPU cycles per offloaded request: cycles_per_input_bit * input_bits."""
        return self.cycles_per_input_bit * self.input_bits


# Configuration keys, in canonical emission order, with the unit conversion
# applied at ingestion.  Values in the file are plain numbers except
# backhaul_mode, which takes "cross_tier_only" or "always".
CONFIG_KEYS: tuple[str, ...] = (
    "lambda_m_per_km2",
    "lambda_s_per_km2",
    "lambda_u_per_km2",
    "p_m_dbm",
    "p_s_dbm",
    "p_u_dbm",
    "f_m_hz",
    "f_s_hz",
    "w_ul_hz",
    "w_dl_hz",
    "noise_dbm",
    "alpha",
    "b_in_bits",
    "b_out_bits",
    "cycles_per_input_bit",
    "c_bh_bps",
    "gamma_ul_db",
    "gamma_dl_db",
    "backhaul_mode",
)

RAW_DEFAULTS: dict[str, float | str] = {
    "lambda_m_per_km2": 1.0,
    "lambda_s_per_km2": 10.0,
    "lambda_u_per_km2": 25.0,
    "p_m_dbm": 46.0,
    "p_s_dbm": 30.0,
    "p_u_dbm": 20.0,
    "f_m_hz": 4.5e9,
    "f_s_hz": 3.6e9,
    "w_ul_hz": 1.4e6,
    "w_dl_hz": 1.4e6,
    "noise_dbm": -120.0,
    "alpha": 4.0,
    "b_in_bits": 4000.0,
    "b_out_bits": 1000.0,
    "cycles_per_input_bit": 2640.0,
    "c_bh_bps": 1.0e7,
    "gamma_ul_db": -10.0,
    "gamma_dl_db": -10.0,
    "backhaul_mode": "cross_tier_only",
}


def parse_config_text(text: str) -> dict[str, float | str]:
    """Parse a flat key=value document into a raw mapping (defaults applied).

    Lines are ``key = value``; blank lines and ``#`` comments are ignored.
    Unknown keys and non-numeric values are rejected.
    """
    raw: dict[str, float | str] = dict(RAW_DEFAULTS)
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = body.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in RAW_DEFAULTS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}", key=key)
        if key == "backhaul_mode":
            raw[key] = value.lower()
            continue
        try:
            raw[key] = float(value)
        except ValueError:
            raise ConfigError(
                f"line {lineno}: non-numeric value {value!r} for key {key!r}",
                key=key,
            ) from None
    return raw


def params_from_raw(raw: dict[str, float | str]) -> ScenarioParams:
    """Convert a raw config mapping to SI and validate every invariant.

    Errors name the offending key and quote both the raw and the converted
    value so unit mistakes are visible at a glance.
    """
    merged: dict[str, float | str] = dict(RAW_DEFAULTS)
    for key in raw:
        if key not in RAW_DEFAULTS:
            raise ConfigError(f"unknown key {key!r}", key=key)
        merged[key] = raw[key]

    def num(key: str) -> float:
        value = merged[key]
        if not isinstance(value, (int, float)) or not math.isfinite(float(value)):
            raise ConfigError(f"key {key!r}: expected a finite number, got {value!r}", key=key)
        return float(value)

    mode_text = str(merged["backhaul_mode"]).lower()
    try:
        mode = BackhaulMode(mode_text)
    except ValueError:
        raise ConfigError(
            f"key 'backhaul_mode': expected 'cross_tier_only' or 'always', got {mode_text!r}",
            key="backhaul_mode",
        ) from None

    def positive(key: str, converted: float, raw_value: float) -> float:
        if not (converted > 0.0):
            raise ConfigError(
                f"key {key!r}: must convert to a positive quantity "
                f"(raw {raw_value!r} -> {converted!r})",
                key=key,
            )
        return converted

    lam_m_raw = num("lambda_m_per_km2")
    lam_s_raw = num("lambda_s_per_km2")
    lam_u_raw = num("lambda_u_per_km2")
    lam_m = positive("lambda_m_per_km2", lam_m_raw * PER_KM2, lam_m_raw)
    if lam_s_raw < 0.0:
        raise ConfigError(
            f"key 'lambda_s_per_km2': must be >= 0 (got {lam_s_raw!r})",
            key="lambda_s_per_km2",
        )
    lam_s = lam_s_raw * PER_KM2
    lam_u = positive("lambda_u_per_km2", lam_u_raw * PER_KM2, lam_u_raw)
    if lam_u < lam_m + lam_s:
        raise ConfigError(
            "key 'lambda_u_per_km2': user density must be at least "
            "lambda_m_per_km2 + lambda_s_per_km2 so the active-uplink "
            "thinning probability stays <= 1 "
            f"(raw {lam_u_raw!r} per km2 -> {lam_u!r} per m2, "
            f"needs >= {(lam_m + lam_s)!r} per m2)",
            key="lambda_u_per_km2",
        )

    p_m = positive("p_m_dbm", dbm_to_watts(num("p_m_dbm")), num("p_m_dbm"))
    p_s = positive("p_s_dbm", dbm_to_watts(num("p_s_dbm")), num("p_s_dbm"))
    p_u = positive("p_u_dbm", dbm_to_watts(num("p_u_dbm")), num("p_u_dbm"))
    if p_m < p_s:
        raise ConfigError(
            "key 'p_m_dbm': macro power must be >= small-cell power "
            f"(raw {num('p_m_dbm')!r} dBm -> {p_m!r} W against "
            f"{num('p_s_dbm')!r} dBm -> {p_s!r} W)",
            key="p_m_dbm",
        )

    alpha = num("alpha")
    if alpha != 4.0:
        raise ConfigError(
            "key 'alpha': only a path-loss exponent of exactly 4 is "
            "supported; the coverage closed forms have no general-alpha "
            f"counterpart here (got {alpha!r})",
            key="alpha",
        )

    f_m = positive("f_m_hz", num("f_m_hz"), num("f_m_hz"))
    f_s = positive("f_s_hz", num("f_s_hz"), num("f_s_hz"))
    if f_m < f_s:
        raise ConfigError(
            "key 'f_s_hz': small-cell cloudlet capacity must not exceed the "
            f"macro cloudlet capacity (got {f_s!r} > {f_m!r})",
            key="f_s_hz",
        )

    try:
        return ScenarioParams(
            macro=TierParams(density=lam_m, tx_power=p_m, cloudlet_capacity=f_m),
            small=TierParams(density=lam_s, tx_power=p_s, cloudlet_capacity=f_s),
            user_density=lam_u,
            user_tx_power=p_u,
            ul_bandwidth=positive("w_ul_hz", num("w_ul_hz"), num("w_ul_hz")),
            dl_bandwidth=positive("w_dl_hz", num("w_dl_hz"), num("w_dl_hz")),
            noise_power=positive("noise_dbm", dbm_to_watts(num("noise_dbm")), num("noise_dbm")),
            pathloss_exponent=alpha,
            input_bits=positive("b_in_bits", num("b_in_bits"), num("b_in_bits")),
            output_bits=positive("b_out_bits", num("b_out_bits"), num("b_out_bits")),
            cycles_per_input_bit=positive(
                "cycles_per_input_bit", num("cycles_per_input_bit"), num("cycles_per_input_bit")
            ),
            backhaul_capacity=positive("c_bh_bps", num("c_bh_bps"), num("c_bh_bps")),
            ul_sinr_threshold=db_to_linear(num("gamma_ul_db")),
            dl_sinr_threshold=db_to_linear(num("gamma_dl_db")),
            backhaul_mode=mode,
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def parse_config(text: str) -> ScenarioParams:
    """Parse a configuration document; an empty document yields the defaults."""
    return params_from_raw(parse_config_text(text))


def default_params() -> ScenarioParams:
    return params_from_raw({})


def raw_from_params(params: ScenarioParams) -> dict[str, float | str]:
    """Invert the unit conversions back to the configuration-file units."""
    return {
        "lambda_m_per_km2": params.macro.density / PER_KM2,
        "lambda_s_per_km2": params.small.density / PER_KM2,
        "lambda_u_per_km2": params.user_density / PER_KM2,
        "p_m_dbm": watts_to_dbm(params.macro.tx_power),
        "p_s_dbm": watts_to_dbm(params.small.tx_power),
        "p_u_dbm": watts_to_dbm(params.user_tx_power),
        "f_m_hz": params.macro.cloudlet_capacity,
        "f_s_hz": params.small.cloudlet_capacity,
        "w_ul_hz": params.ul_bandwidth,
        "w_dl_hz": params.dl_bandwidth,
        "noise_dbm": watts_to_dbm(params.noise_power),
        "alpha": params.pathloss_exponent,
        "b_in_bits": params.input_bits,
        "b_out_bits": params.output_bits,
        "cycles_per_input_bit": params.cycles_per_input_bit,
        "c_bh_bps": params.backhaul_capacity,
        "gamma_ul_db": linear_to_db(params.ul_sinr_threshold),
        "gamma_dl_db": linear_to_db(params.dl_sinr_threshold),
        "backhaul_mode": params.backhaul_mode.value,
    }


def canonical_config(params: ScenarioParams) -> str:
    """Emit a config document that parses back to (floating-point) identical params.

    Numbers are written with repr precision, so the only loss on a round trip
    is the last-ulp wobble of the dBm/dB transforms.
    """
    raw = raw_from_params(params)
    lines = []
    for key in CONFIG_KEYS:
        value = raw[key]
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"
