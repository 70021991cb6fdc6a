"""Rate expressions for the access and fronthaul links, their log-det surrogates,
and the subset-constraint form of the fronthaul budget.

All mutual informations are in bits per complex sample.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np
from scipy.linalg import block_diag

from .errors import ConfigError, DomainError

LN2 = np.log(2.0)
PSD_TOL = 1e-9
MAX_SUBSET_RUS = 12


def hermitian(X):
    X = np.asarray(X)
    return 0.5 * (X + X.conj().T)


def project_psd(X, name="matrix"):
    """Hermitian part of ``X`` with tiny negative eigenvalues clipped to zero.

    Raises DomainError when the most negative eigenvalue exceeds -1e-9 * trace.
    """
    X = hermitian(np.atleast_2d(X))
    w, V = np.linalg.eigh(X)
    tr = abs(np.trace(X).real)
    if w.min() < -PSD_TOL * max(tr, np.finfo(float).tiny):
        raise DomainError(f"{name} is not positive semidefinite (min eigenvalue {w.min():.3e})")
    if w.min() >= 0:
        return X
    return (V * np.maximum(w, 0.0)) @ V.conj().T


def logdet(X, name="matrix"):
    """Natural log-determinant of a Hermitian positive definite matrix."""
    X = hermitian(np.atleast_2d(X))
    try:
        C = np.linalg.cholesky(X)
        return 2.0 * np.log(np.abs(np.diag(C))).sum()
    except np.linalg.LinAlgError:
        w = np.linalg.eigvalsh(X)
        if w.min() <= 0:
            raise DomainError(f"{name} is singular or indefinite (min eigenvalue {w.min():.3e})")
        return np.log(w).sum()


def log2det(X, name="matrix"):
    return logdet(X, name) / LN2


def received_covariance(H, Sigma):
    H = np.atleast_2d(H)
    return hermitian(H @ np.atleast_2d(Sigma) @ H.conj().T)


def assemble_distortion(D_blocks):
    """Block-diagonal D = diag{D_1, ..., D_M}."""
    return block_diag(*[np.atleast_2d(D) for D in D_blocks])


def access_mutual_information(H, Sigma, D, sigma2):
    """I(x; y_hat) for the stacked channel ``H`` and (block-diagonal) distortion ``D``."""
    R = received_covariance(H, Sigma)
    D = project_psd(D, "D")
    I = np.eye(R.shape[0])
    return log2det(R + D + sigma2 * I) - log2det(D + sigma2 * I)


def fronthaul_mutual_information(H_m, Sigma, D_m, sigma2):
    """I(y_m; y_hat_m): bits per sample RU m must forward."""
    R = received_covariance(H_m, Sigma)
    D_m = project_psd(D_m, "D_m")
    I = np.eye(R.shape[0])
    return log2det(R + D_m + sigma2 * I) - log2det(D_m, "D_m")


def rub_upper_bound(H_m, Sigma, D_m, A_m, sigma2):
    """Upper bound on I(y_m; y_hat_m) that is convex in D_m for fixed A_m.

    Tight when A_m = optimal_A(H_m, Sigma, D_m, sigma2).
    """
    R = received_covariance(H_m, Sigma)
    D_m = project_psd(D_m, "D_m")
    A_m = hermitian(np.atleast_2d(A_m))
    n = R.shape[0]
    Z = R + D_m + sigma2 * np.eye(n)
    return (-log2det(A_m, "A_m") + np.trace(A_m @ Z).real / LN2 - n / LN2
            - log2det(D_m, "D_m"))


def optimal_A(H_m, Sigma, D_m, sigma2):
    R = received_covariance(H_m, Sigma)
    D_m = project_psd(D_m, "D_m")
    return hermitian(np.linalg.inv(R + D_m + sigma2 * np.eye(R.shape[0])))


def optimal_B(D, sigma2):
    D = project_psd(D, "D")
    return hermitian(np.linalg.inv(D + sigma2 * np.eye(D.shape[0])))


def surrogate_bracket(H, Sigma, D, B, sigma2):
    """log2|HSH^H + D + s2 I| + log2|B| - Tr(B (D + s2 I)) / ln 2 + MN / ln 2.

    Lower bound on I(x; y_hat) for any B >= 0, equal to it at B = optimal_B(D).
    """
    R = received_covariance(H, Sigma)
    n = R.shape[0]
    X = D + sigma2 * np.eye(n)
    return log2det(R + X) + log2det(B, "B") - np.trace(B @ X).real / LN2 + n / LN2


def surrogate_bracket_gradient(H, Sigma, D, B, sigma2):
    """Matrix gradient of :func:`surrogate_bracket` w.r.t. D (Hermitian, full size)."""
    R = received_covariance(H, Sigma)
    Z = R + D + sigma2 * np.eye(R.shape[0])
    return hermitian(np.linalg.inv(Z) - B) / LN2


def rub_gradient(D_m, A_m):
    """Matrix gradient of :func:`rub_upper_bound` w.r.t. D_m."""
    return hermitian(A_m - np.linalg.inv(D_m)) / LN2


class LogdetIdentityCheck(NamedTuple):
    residual: float
    stationarity: float
    is_maximum: bool


def logdet_identity_check(X, rng=None, n_directions=5, step=1e-6):
    """Verify log2|X^-1| = max_Y log2|Y| - Tr(YX)/ln2 + J/ln2 at Y* = X^-1.

    Returns the identity residual, the largest central finite-difference
    directional derivative at Y* over random PSD directions, and whether Y*
    beats the perturbed points Y* + 1e-2 E in every probed direction.
    """
    X = hermitian(np.atleast_2d(X))
    if np.linalg.eigvalsh(X).min() <= 0:
        raise DomainError("X must be positive definite")
    J = X.shape[0]
    rng = np.random.default_rng() if rng is None else rng
    Y = hermitian(np.linalg.inv(X))

    def g(Yv):
        return log2det(Yv, "Y") - np.trace(Yv @ X).real / LN2 + J / LN2

    residual = abs(-log2det(X) - g(Y))
    lam_min = np.linalg.eigvalsh(Y).min()
    worst = 0.0
    is_max = True
    g0 = g(Y)
    for _ in range(n_directions):
        Z = rng.standard_normal((J, J)) + 1j * rng.standard_normal((J, J))
        E = Z @ Z.conj().T
        E *= lam_min / np.linalg.norm(E, 2)
        deriv = (g(Y + step * E) - g(Y - step * E)) / (2.0 * step)
        worst = max(worst, abs(deriv))
        is_max &= g(Y + 1e-2 * E) < g0 and g(Y - 1e-2 * E) < g0
    return LogdetIdentityCheck(float(residual), float(worst), bool(is_max))


@dataclass(frozen=True)
class SubsetConstraintSet:
    """Normalized fronthaul budget constraints, one row per RU subset.

    Row ``s`` reads  alpha0 * f_s * sum_m weights[s, m] * I_m
                       <= rf_share[s] * (1 - alpha0) + fso_term[s].
    For the hybrid fronthaul weights are 1/C_m^rf over the subset, rf_share is 1
    and fso_term = sum C_m^fso / C_m^rf (the subset inequality divided by the
    product of RF capacities).
    """

    subsets: tuple
    weights: np.ndarray
    fso_term: np.ndarray
    rf_share: np.ndarray
    f_s: float
    c_fso: np.ndarray
    c_rf: np.ndarray
    rf_floored: np.ndarray

    def __len__(self):
        return len(self.subsets)

    @property
    def M(self) -> int:
        return self.weights.shape[1]

    def rhs(self, alpha0):
        return self.rf_share * (1.0 - alpha0) + self.fso_term

    def lhs(self, alpha0, mi_values):
        return alpha0 * self.f_s * (self.weights @ np.asarray(mi_values, dtype=float))

    def slacks(self, alpha0, mi_values):
        return self.rhs(alpha0) - self.lhs(alpha0, mi_values)


def build_subset_constraints(capacities, f_s, w_rf=None):
    """All 2^M - 1 subset constraints for the hybrid RF/FSO fronthaul.

    RF capacities are floored at 1e-6 * w_rf (1e-6 * f_s when ``w_rf`` is not
    given) inside the weights.
    """
    c_fso = np.asarray(capacities.c_fso, dtype=float)
    c_rf = np.asarray(capacities.c_rf, dtype=float)
    M = len(c_fso)
    if M > MAX_SUBSET_RUS:
        raise ConfigError(f"M={M} exceeds {MAX_SUBSET_RUS} RUs for subset enumeration; "
                          "use minimal_time_feasible instead")
    if not (np.all(np.isfinite(c_fso)) and np.all(np.isfinite(c_rf))):
        raise ConfigError("capacities must be finite")
    floor = 1e-6 * (w_rf if w_rf is not None else f_s)
    floored = c_rf < floor
    c_rf_eff = np.maximum(c_rf, floor)
    subsets = tuple(s for r in range(1, M + 1) for s in combinations(range(M), r))
    weights = np.zeros((len(subsets), M))
    for i, s in enumerate(subsets):
        weights[i, list(s)] = 1.0 / c_rf_eff[list(s)]
    fso_term = weights @ c_fso
    return SubsetConstraintSet(subsets=subsets, weights=weights, fso_term=fso_term,
                               rf_share=np.ones(len(subsets)), f_s=float(f_s),
                               c_fso=c_fso, c_rf=c_rf, rf_floored=floored)


def _floored_overload(alpha0, mi_values, cs):
    need = alpha0 * cs.f_s * np.asarray(mi_values, dtype=float)
    return bool(np.any(cs.rf_floored & (need > cs.c_fso)))


def subset_feasible(alpha0, mi_values, constraint_set, tol=1e-12):
    """``(feasible, worst_slack)`` over every subset constraint (normalized units)."""
    slack = constraint_set.slacks(alpha0, mi_values)
    worst = float(slack.min())
    if _floored_overload(alpha0, mi_values, constraint_set):
        return False, worst
    return worst >= -tol, worst


def minimal_time_feasible(alpha0, mi_values, capacities, f_s, tol=1e-12):
    """Feasibility via the smallest per-RU RF time fractions.

    Returns ``(feasible, alpha)`` where alpha_m = [alpha0 f_s I_m - C_m^fso]^+ / C_m^rf
    (``inf`` when RU m needs RF time but has no RF capacity).
    """
    need = alpha0 * f_s * np.asarray(mi_values, dtype=float) - np.asarray(capacities.c_fso, dtype=float)
    need = np.maximum(need, 0.0)
    c_rf = np.asarray(capacities.c_rf, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = np.where(need > 0, need / np.where(c_rf > 0, c_rf, 1.0), 0.0)
    alpha = np.where((need > 0) & (c_rf <= 0), np.inf, alpha)
    feasible = bool(np.all(np.isfinite(alpha)) and alpha.sum() <= (1.0 - alpha0) + tol)
    return feasible, alpha
