"""Random channel realizations for the access, RF fronthaul and FSO fronthaul links.

Access links use Rayleigh fading, RF fronthaul links Rician fading with an
all-ones LOS component, and FSO links Gamma-Gamma turbulence on top of a
Beer-Lambert / Gaussian-beam gain.  Path loss follows the log-distance model.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf


def db_to_linear(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def dbm_to_watt(x_dbm):
    return 1e-3 * db_to_linear(x_dbm)


@dataclass(frozen=True)
class GeometryConfig:
    """Link geometry and propagation parameters (linear SI units)."""

    d_ac: float = 100.0
    d_fr: float = 500.0
    d_ref: float = 5.0
    G_tx_mu: float = 0.0
    G_rx_ru: float = 10.0
    G_tx_ru: float = 10.0
    G_rx_cu: float = 10.0
    nu: float = 3.5
    lambda_rf: float = 85.7e-3
    lambda_fso: float = 1550e-9
    Omega: float = float(db_to_linear(6.0))
    Theta: float = 2.23
    Phi: float = 1.54
    kappa: float = 4.2e-3
    r_aperture: float = 0.1
    phi_div: float = 2e-3
    responsivity: float = 0.5

    def __post_init__(self):
        for name in ("d_ac", "d_fr", "d_ref", "nu", "Theta", "Phi", "lambda_rf",
                     "r_aperture", "phi_div", "responsivity"):
            if not getattr(self, name) > 0:
                raise ValueError(f"geometry.{name} must be > 0, got {getattr(self, name)!r}")
        if self.kappa < 0:
            raise ValueError(f"geometry.kappa must be >= 0, got {self.kappa!r}")
        if self.Omega < 0:
            raise ValueError(f"geometry.Omega must be >= 0, got {self.Omega!r}")


@dataclass(frozen=True)
class SystemConfig:
    """Network dimensions, powers, noise levels and bandwidths (linear SI units)."""

    K: int = 4
    M: int = 2
    N: int = 2
    L: int = 8
    P_k: tuple = ()
    P_bar_m: tuple = ()
    P_tilde_m: tuple = ()
    sigma2: float = 5.0e-13
    delta2: float = 1e-14
    W_rf: float = 40e6
    W_fso: float = 1e9
    f_s: float = 40e6

    def __post_init__(self):
        for name in ("K", "M", "N", "L"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"system.{name} must be >= 1, got {getattr(self, name)!r}")
        # default powers when none are given explicitly
        if not self.P_k:
            object.__setattr__(self, "P_k", (float(dbm_to_watt(16.0)),) * self.K)
        if not self.P_bar_m:
            object.__setattr__(self, "P_bar_m", (float(dbm_to_watt(33.0)),) * self.M)
        if not self.P_tilde_m:
            object.__setattr__(self, "P_tilde_m", (float(dbm_to_watt(13.0)),) * self.M)
        for name, n in (("P_k", self.K), ("P_bar_m", self.M), ("P_tilde_m", self.M)):
            vals = tuple(float(v) for v in getattr(self, name))
            object.__setattr__(self, name, vals)
            if len(vals) != n:
                raise ValueError(f"system.{name} must have length {n}, got {len(vals)}")
            if min(vals) <= 0:
                raise ValueError(f"system.{name} entries must be > 0")
        for name in ("sigma2", "delta2", "W_rf", "W_fso", "f_s"):
            if not getattr(self, name) > 0:
                raise ValueError(f"system.{name} must be > 0, got {getattr(self, name)!r}")
        if self.f_s < self.W_rf:
            raise ValueError(f"system.f_s ({self.f_s}) must be >= system.W_rf ({self.W_rf})")

    @property
    def Sigma(self) -> np.ndarray:
        return np.diag(np.asarray(self.P_k, dtype=float))


@dataclass(frozen=True)
class ChannelRealization:
    """One fading block: access channels ``H``, RF fronthaul ``F`` and FSO gains ``g``."""

    H: tuple
    F: tuple
    g: np.ndarray
    seed: int | None = None

    @property
    def M(self) -> int:
        return len(self.H)

    @property
    def N(self) -> int:
        return self.H[0].shape[0]

    @property
    def K(self) -> int:
        return self.H[0].shape[1]

    @property
    def H_stacked(self) -> np.ndarray:
        return np.vstack(self.H)


def _check_dims(rows, cols):
    if int(rows) < 1 or int(cols) < 1:
        raise ValueError(f"matrix dimensions must be >= 1, got ({rows}, {cols})")


def _unit_cn(rows, cols, rng):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def sample_rayleigh(rows, cols, path_loss_linear, rng):
    """i.i.d. CN(0, path_loss_linear) entries."""
    _check_dims(rows, cols)
    if not path_loss_linear > 0:
        raise ValueError(f"path_loss_linear must be > 0, got {path_loss_linear!r}")
    return np.sqrt(path_loss_linear) * _unit_cn(rows, cols, rng)


def sample_rician(rows, cols, omega_linear, path_loss_linear, rng):
    """Rician matrix with all-ones LOS part and unit average power per entry (times path loss)."""
    _check_dims(rows, cols)
    if omega_linear < 0:
        raise ValueError(f"Rician factor must be >= 0, got {omega_linear!r}")
    if not path_loss_linear > 0:
        raise ValueError(f"path_loss_linear must be > 0, got {path_loss_linear!r}")
    los = np.ones((rows, cols), dtype=complex)
    scatter = _unit_cn(rows, cols, rng)
    mix = np.sqrt(omega_linear / (omega_linear + 1.0)) * los + np.sqrt(1.0 / (omega_linear + 1.0)) * scatter
    return np.sqrt(path_loss_linear) * mix


def sample_gamma_gamma(theta, phi, rng, size=None):
    """Unit-mean Gamma-Gamma turbulence gain(s)."""
    if not (theta > 0 and phi > 0):
        raise ValueError(f"Gamma-Gamma shapes must be > 0, got ({theta!r}, {phi!r})")
    h1 = rng.gamma(shape=theta, scale=1.0 / theta, size=size)
    h2 = rng.gamma(shape=phi, scale=1.0 / phi, size=size)
    return h1 * h2


def rf_path_loss_linear(d, d_ref, nu, lambda_rf, gains_dBi=(0.0, 0.0)):
    """Log-distance path loss anchored at free-space loss at ``d_ref``.

    ``gains_dBi`` is the (transmit, receive) antenna gain pair.
    """
    if not d_ref > 0:
        raise ValueError(f"d_ref must be > 0, got {d_ref!r}")
    if d < d_ref:
        raise ValueError(f"distance {d!r} is below the reference distance {d_ref!r}")
    g_tx, g_rx = gains_dBi
    pl_db = (g_tx + g_rx + 20.0 * np.log10(lambda_rf / (4.0 * np.pi * d_ref))
             - 10.0 * nu * np.log10(d / d_ref))
    return float(10.0 ** (pl_db / 10.0))


def fso_channel_gain(d, kappa, r_aperture, phi_div, responsivity, h_turb):
    """FSO gain: responsivity x geometric collection x Beer-Lambert loss x turbulence.

    ``kappa`` is in dB/m.
    """
    if not d > 0:
        raise ValueError(f"d must be > 0, got {d!r}")
    h_turb = np.asarray(h_turb, dtype=float)
    if np.any(h_turb < 0):
        raise ValueError("turbulence gain must be >= 0")
    collection = erf(np.sqrt(np.pi) * r_aperture / (np.sqrt(2.0) * phi_div * d)) ** 2
    atten = 10.0 ** (-kappa * d / 10.0)
    g = responsivity * collection * atten * h_turb
    return float(g) if g.ndim == 0 else g


def generate_realization(system, geometry, rng, seed=None):
    """Draw one fading block.

    Draw order is fixed (H blocks, then F blocks, then turbulence), so sweeping
    a geometry parameter with the same seed reuses the same small-scale fading.
    """
    pl_ac = rf_path_loss_linear(geometry.d_ac, geometry.d_ref, geometry.nu, geometry.lambda_rf,
                                (geometry.G_tx_mu, geometry.G_rx_ru))
    pl_fr = rf_path_loss_linear(geometry.d_fr, geometry.d_ref, geometry.nu, geometry.lambda_rf,
                                (geometry.G_tx_ru, geometry.G_rx_cu))
    H = tuple(sample_rayleigh(system.N, system.K, pl_ac, rng) for _ in range(system.M))
    F = tuple(sample_rician(system.L, system.N, geometry.Omega, pl_fr, rng) for _ in range(system.M))
    h_turb = sample_gamma_gamma(geometry.Theta, geometry.Phi, rng, size=system.M)
    g = np.atleast_1d(fso_channel_gain(geometry.d_fr, geometry.kappa, geometry.r_aperture,
                                       geometry.phi_div, geometry.responsivity, h_turb))
    return ChannelRealization(H=H, F=F, g=g, seed=seed)


def trial_seed(master_seed, trial):
    """Sub-seed for one trial: first 64 bits of SeedSequence([master, trial]).

    Each trial's stream depends only on (master_seed, trial index), so trials can
    be run in any order or in parallel.
    """
    state = np.random.SeedSequence([int(master_seed), int(trial)]).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)
