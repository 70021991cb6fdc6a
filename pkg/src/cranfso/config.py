"""Key-value run configuration with snake_case parameter names and units.

A config file is a flat list of ``key = value`` lines (``#`` comments allowed)::

    p_k_dbm = 16
    w_rf_mhz = 40
    kappa_db_per_m = 125e-3

Powers are given in dBm, gains in dBi or dB, and everything is converted to
linear SI units when loaded.  Unknown keys are rejected.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass

import numpy as np

from .channel import GeometryConfig, SystemConfig, db_to_linear, dbm_to_watt
from .errors import ConfigError

DEFAULTS = {
    # dimensions and Monte-Carlo size (desk profile)
    "k": 4,
    "m": 2,
    "n": 2,
    "l": 8,
    "trials": 100,
    # RF links
    "d_ac_m": 100.0,
    "d_fr_m": 500.0,
    "d_ref_m": 5.0,
    "p_k_dbm": 16.0,
    "p_bar_dbm": 33.0,
    "g_tx_mu_dbi": 0.0,
    "g_rx_ru_dbi": 10.0,
    "g_tx_ru_dbi": 10.0,
    "g_rx_cu_dbi": 10.0,
    "n0_dbm_per_mhz": -114.0,
    "noise_figure_db": 5.0,
    "lambda_rf_mm": 85.7,
    "w_rf_mhz": 40.0,
    "omega_db": 6.0,
    "nu": 3.5,
    "f_s_mhz": 40.0,
    # FSO links
    "p_fso_dbm": 13.0,
    "delta2": 1e-14,
    "lambda_fso_nm": 1550.0,
    "w_fso_ghz": 1.0,
    "responsivity": 0.5,
    "phi_mrad": 2.0,
    "r_cm": 10.0,
    "theta": 2.23,
    "phi": 1.54,
    "kappa_db_per_m": 4.2e-3,
}

INT_KEYS = {"k", "m", "n", "l", "trials"}

# bandwidths and lengths enter logarithms or divisions before the model checks run
POSITIVE_KEYS = {"w_rf_mhz", "w_fso_ghz", "f_s_mhz", "delta2", "lambda_rf_mm", "lambda_fso_nm",
                 "r_cm", "phi_mrad", "responsivity", "d_ac_m", "d_fr_m", "d_ref_m"}

FULL_SCALE = {"k": 8, "m": 2, "n": 8, "l": 64, "trials": 1000}

_SECTION = "config"


@dataclass(frozen=True)
class RunConfig:
    system: SystemConfig
    geometry: GeometryConfig
    trials: int
    values: dict


def noise_variance_watt(n0_dbm_per_mhz, w_rf_mhz, noise_figure_db):
    """sigma^2 in W from N0 (dBm/MHz), the RF bandwidth (MHz) and the noise figure (dB)."""
    return float(dbm_to_watt(n0_dbm_per_mhz + 10.0 * np.log10(w_rf_mhz) + noise_figure_db))


def parse_config_text(text, source="<string>"):
    """Raw ``{key: value}`` overrides from config text (values converted to numbers)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str.lower
    try:
        parser.read_string(f"[{_SECTION}]\n" + text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: cannot parse config ({exc})") from exc
    out = {}
    for key, raw in parser.items(_SECTION):
        if key not in DEFAULTS:
            raise ConfigError(f"{source}: unknown key 'config.{key}'")
        try:
            out[key] = int(raw) if key in INT_KEYS else float(raw)
        except ValueError:
            raise ConfigError(f"{source}: config.{key} = {raw!r} is not a number") from None
    return out


def read_config_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text, source=str(path))


def build_config(overrides=None, full_scale=False):
    """RunConfig from the defaults, the full-scale profile and explicit overrides."""
    values = dict(DEFAULTS)
    if full_scale:
        values.update(FULL_SCALE)
    values.update(overrides or {})
    if values["trials"] < 1:
        raise ConfigError("config.trials must be >= 1")
    for key in sorted(POSITIVE_KEYS):
        if not values[key] > 0:
            raise ConfigError(f"config.{key} must be > 0, got {values[key]!r}")
    K, M = values["k"], values["m"]
    try:
        system = SystemConfig(
            K=K, M=M, N=values["n"], L=values["l"],
            P_k=(float(dbm_to_watt(values["p_k_dbm"])),) * K,
            P_bar_m=(float(dbm_to_watt(values["p_bar_dbm"])),) * M,
            P_tilde_m=(float(dbm_to_watt(values["p_fso_dbm"])),) * M,
            sigma2=noise_variance_watt(values["n0_dbm_per_mhz"], values["w_rf_mhz"],
                                       values["noise_figure_db"]),
            delta2=values["delta2"],
            W_rf=values["w_rf_mhz"] * 1e6,
            W_fso=values["w_fso_ghz"] * 1e9,
            f_s=values["f_s_mhz"] * 1e6,
        )
        geometry = GeometryConfig(
            d_ac=values["d_ac_m"], d_fr=values["d_fr_m"], d_ref=values["d_ref_m"],
            G_tx_mu=values["g_tx_mu_dbi"], G_rx_ru=values["g_rx_ru_dbi"],
            G_tx_ru=values["g_tx_ru_dbi"], G_rx_cu=values["g_rx_cu_dbi"],
            nu=values["nu"], lambda_rf=values["lambda_rf_mm"] * 1e-3,
            lambda_fso=values["lambda_fso_nm"] * 1e-9, Omega=float(db_to_linear(values["omega_db"])),
            Theta=values["theta"], Phi=values["phi"], kappa=values["kappa_db_per_m"],
            r_aperture=values["r_cm"] * 1e-2, phi_div=values["phi_mrad"] * 1e-3,
            responsivity=values["responsivity"],
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return RunConfig(system=system, geometry=geometry, trials=int(values["trials"]), values=values)


def load_config(path=None, full_scale=False):
    overrides = read_config_file(path) if path is not None else {}
    return build_config(overrides, full_scale=full_scale)


def default_config_text():
    """The defaults rendered as a config file."""
    return "".join(f"{k} = {v}\n" for k, v in DEFAULTS.items())
