"""Fronthaul link capacities: OOK over the FSO link and water-filling over the RF link."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LN2 = np.log(2.0)
_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite.hermgauss(64)


@dataclass(frozen=True)
class LinkCapacities:
    """Per-RU fronthaul capacities in bits/s."""

    c_fso: np.ndarray
    c_rf: np.ndarray

    @property
    def M(self) -> int:
        return len(self.c_fso)


def ook_capacity_bpcu(snr):
    """Equiprobable OOK capacity (bits/use) at amplitude-to-noise ratio ``snr`` = A/delta.

    Gauss-Hermite evaluation of 1 - E[log2(1 + exp(-snr^2/2 + snr*n))], n ~ N(0, 1).
    """
    snr = float(snr)
    u = snr / np.sqrt(2.0)
    if u < 1e-6:
        return 0.0
    if u > 30.0:
        return 1.0
    z = -0.5 * snr * snr + snr * np.sqrt(2.0) * _GH_NODES
    expect = _GH_WEIGHTS @ np.logaddexp(0.0, z) / (np.sqrt(np.pi) * LN2)
    return float(np.clip(1.0 - expect, 0.0, 1.0))


def ook_capacity_closed_integral(u):
    """Same capacity written with the three-exponential integrand over e^{-t^2}.

    ``u`` = A / sqrt(2 delta^2).  The integral carries the weight 1/(2 sqrt(pi));
    with that weight both limits (0 and 1 bit/use) come out right.
    """
    u = float(u)
    if u < 1e-6:
        return 0.0
    if u > 30.0:
        return 1.0
    t = _GH_NODES
    # log2{1 + e^{-u^2}[e^{2tu} + e^{-2tu} + e^{-u^2}]} = sum of two softplus terms
    inner = (np.logaddexp(0.0, -u * u + 2.0 * t * u) + np.logaddexp(0.0, -u * u - 2.0 * t * u)) / LN2
    return float(np.clip(1.0 - (_GH_WEIGHTS @ inner) / (2.0 * np.sqrt(np.pi)), 0.0, 1.0))


def fso_capacity(g, p_tilde, delta2, w_fso):
    """FSO fronthaul capacity in bits/s for OOK with peak power ``p_tilde``."""
    if g < 0:
        raise ValueError(f"FSO gain must be >= 0, got {g!r}")
    snr = p_tilde * g / np.sqrt(delta2)
    return float(np.clip(w_fso * ook_capacity_bpcu(snr), 0.0, w_fso))


def ook_capacity_oracle(snr, n_samples, rng, return_stderr=False):
    """Monte-Carlo estimate of the OOK capacity, independent of the quadrature path."""
    if n_samples < 1000:
        raise ValueError(f"n_samples must be >= 1000, got {n_samples}")
    if snr < 0:
        raise ValueError(f"snr must be >= 0, got {snr!r}")
    n = rng.standard_normal(int(n_samples))
    vals = np.logaddexp(0.0, -0.5 * snr * snr + snr * n) / LN2
    est = 1.0 - vals.mean()
    if return_stderr:
        return est, vals.std(ddof=1) / np.sqrt(n_samples)
    return est


def waterfill_rf_capacity(F, p_bar, sigma2, w_rf):
    """Water-filling capacity of the L x N fronthaul channel ``F``.

    Returns ``(capacity_bits_per_s, mu)``; ``mu`` is the water level.
    """
    F = np.asarray(F)
    if not np.all(np.isfinite(F)):
        raise ValueError("fronthaul channel has non-finite entries")
    if not (p_bar > 0 and sigma2 > 0 and w_rf > 0):
        raise ValueError("p_bar, sigma2 and w_rf must be > 0")
    chi = np.linalg.svd(np.atleast_2d(F), compute_uv=False)
    if chi.size == 0 or chi.max() == 0:
        return 0.0, 0.0
    chi = chi[chi > 1e-12 * chi.max()]
    floors = sigma2 / chi**2

    def used(mu):
        return np.maximum(mu - floors, 0.0).sum()

    lo, hi = floors.min(), floors.min() + p_bar
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if used(mid) > p_bar:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * hi:
            break
    # exact level on the active set found by bisection
    active = floors < 0.5 * (lo + hi)
    mu = (p_bar + floors[active].sum()) / active.sum()
    cap = w_rf * np.maximum(np.log2(mu / floors), 0.0).sum()
    return float(cap), float(mu)


def link_capacities(realization, system):
    """FSO and RF fronthaul capacities for every RU of a realization."""
    c_fso = np.array([fso_capacity(realization.g[m], system.P_tilde_m[m], system.delta2, system.W_fso)
                      for m in range(realization.M)])
    c_rf = np.array([waterfill_rf_capacity(realization.F[m], system.P_bar_m[m], system.sigma2,
                                           system.W_rf)[0]
                     for m in range(realization.M)])
    return LinkCapacities(c_fso=c_fso, c_rf=c_rf)
