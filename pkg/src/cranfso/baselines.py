"""FSO-only benchmark schemes: scalar (FSO-SQ) and vector (FSO-VQ) quantization.

Both keep the whole RF time for the access link (alpha0 = 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rate
from .errors import InfeasibleError
from .optimizer import SolverSettings, aco_inner, evaluate_sum_rate, initialize_distortion

EXCLUDED_SCALE = 1e12


@dataclass
class BaselineResult:
    scheme: str
    c_sum: float
    D: list
    per_antenna_rates: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)


def _antenna_signal_power(realization, system):
    return [np.real(np.diag(rate.received_covariance(H, system.Sigma))) for H in realization.H]


def sq_distortion(realization, capacities, system):
    """Per-antenna distortions for identical per-antenna rates C_m^fso / (f_s N).

    Returns ``(D_blocks, rates)``.  An RU with no FSO capacity gets
    d = 1e12 (S + sigma2), which removes its antennas from the sum rate.
    """
    N = realization.N
    blocks, rates = [], []
    for m, S in enumerate(_antenna_signal_power(realization, system)):
        r = capacities.c_fso[m] / (system.f_s * N)
        if r <= 0:
            d = EXCLUDED_SCALE * (S + system.sigma2)
            r = 0.0
        else:
            with np.errstate(over="ignore"):  # lossless limit: d -> 0
                d = (S + system.sigma2) / np.expm1(r * np.log(2.0))
        blocks.append(np.diag(d).astype(complex))
        rates.append(np.full(N, r))
    return blocks, np.array(rates)


def fso_sq(realization, capacities, system):
    D, rates = sq_distortion(realization, capacities, system)
    c_sum = evaluate_sum_rate(1.0, D, realization, system)
    return BaselineResult(scheme="FSO-SQ", c_sum=float(c_sum), D=D, per_antenna_rates=rates)


def fso_only_constraints(capacities, f_s):
    """Per-RU constraints f_s I_m <= C_m^fso as a constraint set (rows only for RUs with C^fso > 0)."""
    c_fso = np.asarray(capacities.c_fso, dtype=float)
    M = len(c_fso)
    usable = [m for m in range(M) if c_fso[m] > 0]
    weights = np.zeros((len(usable), M))
    for i, m in enumerate(usable):
        weights[i, m] = 1.0 / c_fso[m]
    return rate.SubsetConstraintSet(subsets=tuple((m,) for m in usable), weights=weights,
                                    fso_term=np.ones(len(usable)), rf_share=np.zeros(len(usable)),
                                    f_s=float(f_s), c_fso=c_fso,
                                    c_rf=np.asarray(capacities.c_rf, dtype=float),
                                    rf_floored=np.zeros(M, dtype=bool))


def fso_vq(realization, capacities, system, settings=None):
    """FSO-only vector quantization at alpha0 = 1.

    Runs the ACO inner loop on the per-RU FSO constraints.  RUs without FSO
    capacity are excluded as in FSO-SQ.  The SQ distortion (slightly inflated
    to be strictly feasible) is the warm start when the scaled-identity
    initializer fails, and the better of the ACO and SQ solutions is returned.
    """
    settings = settings or SolverSettings()
    sq = fso_sq(realization, capacities, system)
    cs = fso_only_constraints(capacities, system.f_s)
    free = [s[0] for s in cs.subsets]
    if not free:
        return BaselineResult(scheme="FSO-VQ", c_sum=sq.c_sum, D=sq.D,
                              diagnostics={"source": "sq", "iters_aco": 0})
    try:
        D0 = initialize_distortion(1.0, realization, capacities, system, settings, cs,
                                   free=free, D_fixed=sq.D)
        start = "identity"
    except InfeasibleError:
        D0 = [D * (1.0 + 1e-6) if m in free else D for m, D in enumerate(sq.D)]
        start = "sq"
    res = aco_inner(1.0, realization, capacities, system, settings, cs, D_init=D0, free=free)
    diag = {"source": "aco", "start": start, "iters_aco": res.iterations, "T_history": res.T_history}
    if res.feasible and res.c_sum >= sq.c_sum:
        return BaselineResult(scheme="FSO-VQ", c_sum=float(res.c_sum), D=res.solution.D, diagnostics=diag)
    diag["source"] = "sq"
    return BaselineResult(scheme="FSO-VQ", c_sum=sq.c_sum, D=sq.D, diagnostics=diag)
