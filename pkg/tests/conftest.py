import numpy as np
import pytest

from cranfso.capacity import link_capacities
from cranfso.channel import generate_realization
from cranfso.config import build_config


@pytest.fixture(scope="session")
def desk():
    return build_config()


def make_case(desk, seed, **geometry):
    from dataclasses import replace

    geo = replace(desk.geometry, **geometry)
    real = generate_realization(desk.system, geo, np.random.default_rng(seed), seed=seed)
    return real, link_capacities(real, desk.system)


def random_hpd(rng, n, shift=0.1):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return Z @ Z.conj().T + shift * np.eye(n)


def scalar_case(rng):
    """Random M = N = K = 1 instance with the optimum typically inside (0, 1)."""
    from cranfso.capacity import LinkCapacities
    from cranfso.channel import ChannelRealization, SystemConfig

    s2 = 1e-12
    snr = 10 ** rng.uniform(0.5, 4.0)
    system = SystemConfig(K=1, M=1, N=1, L=1, P_k=(1e-3,), sigma2=s2)
    h = np.sqrt(snr * s2 / 1e-3) * np.exp(2j * np.pi * rng.uniform())
    real = ChannelRealization(H=(np.array([[h]]),), F=(np.ones((1, 1)),), g=np.ones(1))
    caps = LinkCapacities(c_fso=np.array([system.f_s * 10 ** rng.uniform(-1.0, 0.5)]),
                          c_rf=np.array([system.W_rf * 10 ** rng.uniform(0.0, 1.3)]))
    return real, caps, system


def scalar_grid_oracle(real, caps, system, n=200, zooms=2):
    """Brute-force max of alpha0 W log2(1 + S/(d + s2)) over an (alpha0, d) grid.

    Linear alpha0 grid by log-spaced d grid, restricted to points that satisfy
    alpha0 f_s log2(1 + (S + s2)/d) <= (1 - alpha0) C_rf + C_fso.  Each zoom
    repeats the n x n search on a box around the previous best point.
    """
    S = float(abs(real.H[0][0, 0]) ** 2 * system.P_k[0])
    s2, W, f_s = system.sigma2, system.W_rf, system.f_s
    c_fso, c_rf = float(caps.c_fso[0]), float(caps.c_rf[0])
    a_lo, a_hi = 0.0, 1.0
    ld_lo, ld_hi = np.log10(s2) - 8, np.log10(s2) + 12
    best = (0.0, 0.0, None)
    for _ in range(zooms + 1):
        a = np.linspace(a_lo, a_hi, n)[:, None]
        d = np.logspace(ld_lo, ld_hi, n)[None, :]
        ok = a * f_s * np.log2(1 + (S + s2) / d) <= (1 - a) * c_rf + c_fso
        val = np.where(ok, a * W * np.log2(1 + S / (d + s2)), -np.inf)
        i, j = np.unravel_index(np.argmax(val), val.shape)
        if val[i, j] > best[0]:
            best = (float(val[i, j]), float(a[i, 0]), float(d[0, j]))
        da = (a_hi - a_lo) / (n - 1)
        dl = (ld_hi - ld_lo) / (n - 1)
        a_lo, a_hi = max(0.0, best[1] - 2 * da), min(1.0, best[1] + 2 * da)
        ld_lo, ld_hi = np.log10(best[2]) - 2 * dl, np.log10(best[2]) + 2 * dl
    return best


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
