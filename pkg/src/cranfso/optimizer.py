"""Joint RF time allocation and distortion design.

Outer loop: golden-section search over the access time fraction alpha0.
Inner loop: alternating optimization of the distortion blocks D_m and the
auxiliary matrices B (objective surrogate) and A_m (rate surrogates), where
the D-step is a convex problem solved with a log-barrier Newton method over
the real coordinates of the Hermitian blocks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import rate
from .errors import ConsistencyError, InfeasibleError, ProbeError
from .rate import LN2

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0
RHO = 1.0 - 1.0 / GOLDEN_RATIO


@dataclass(frozen=True)
class SolverSettings:
    gss_epsilon: float = 0.02
    aco_epsilon_mbps: float = 0.01
    tau_start: float = 1.0
    tau_factor: float = 0.2
    tau_floor: float = 1e-6
    tau_warm: float = 1e-3  # barrier weight for warm-started D-steps
    inner_tol: float = 1e-8
    max_iter: int = 500
    d0: float | None = None  # None: the noise variance
    modified: bool = True  # A_m surrogates in the constraints; False uses exact rates
    armijo_beta: float = 0.5
    armijo_c: float = 1e-4

    def __post_init__(self):
        if not 0 < self.gss_epsilon < 1:
            raise ValueError("gss_epsilon must lie in (0, 1)")
        for name in ("aco_epsilon_mbps", "tau_start", "tau_floor", "tau_warm", "inner_tol", "max_iter"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if not 0 < self.tau_factor < 1:
            raise ValueError("tau_factor must lie in (0, 1)")


@dataclass
class TimeAllocation:
    alpha0: float
    alpha_m: np.ndarray

    @property
    def idle(self) -> float:
        return max(0.0, 1.0 - self.alpha0 - float(np.sum(self.alpha_m)))


@dataclass
class QuantizationSolution:
    D: list
    B_aux: np.ndarray | None = None
    A: list | None = None

    @property
    def D_full(self):
        return rate.assemble_distortion(self.D)


@dataclass
class AcoResult:
    alpha0: float
    solution: QuantizationSolution
    T: float
    c_sum: float
    iterations: int = 0
    T_history: list = field(default_factory=list)
    status: str = "ok"
    newton_steps: int = 0

    @property
    def feasible(self) -> bool:
        return self.status == "ok"


@dataclass
class SumRateResult:
    c_sum: float
    allocation: TimeAllocation
    solution: QuantizationSolution
    diagnostics: dict = field(default_factory=dict)


@dataclass
class GSSResult:
    alpha0: float
    value: float
    payload: object
    iterations: int
    evaluations: int
    history: list
    evaluated: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Hermitian coordinates

def hermitian_basis(n):
    """Basis E_k (n^2 x n x n) of n x n Hermitian matrices: D = sum_k theta_k E_k."""
    E = []
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1.0
        E.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = e[j, i] = 1.0
            E.append(e)
            e = np.zeros((n, n), dtype=complex)
            e[i, j], e[j, i] = 1j, -1j
            E.append(e)
    return np.array(E)


def to_coords(D, basis):
    """Coordinates of Hermitian ``D``; the basis is orthogonal but not normalized."""
    norms = np.einsum("kij,kij->k", basis.conj(), basis).real
    return np.einsum("kij,ij->k", basis.conj(), D).real / norms


def from_coords(theta, basis):
    return np.einsum("k,kij->ij", theta, basis)


def coord_gradient(G, basis):
    """d f / d theta_k = Tr(G E_k) for a matrix gradient G (df = Tr(G dD))."""
    return np.einsum("kij,ji->k", basis, G).real


# ---------------------------------------------------------------------------
# Inner convex problem

class _Subproblem:
    """D-step at fixed alpha0, B and A_m, in bits per sample.

    Maximizes  log2|R + D + s2 I| - Tr(B D)/ln2  subject to
    c * W @ r(D) <= rhs  with r_m the rate surrogate of RU m (or the exact rate
    when ``modified`` is False).  Blocks not in ``free`` are held fixed.
    Free blocks are handled as an (nf, N, N) stack.
    """

    def __init__(self, alpha0, R_full, R_blocks, sigma2, B, A, constraint_set, free, D_fixed, modified):
        self.N = N = R_blocks[0].shape[0]
        self.M = len(R_blocks)
        self.sigma2 = sigma2
        self.B = B
        self.free = list(free)
        self.nf = len(self.free)
        self.modified = modified
        self.c = alpha0 * constraint_set.f_s
        W = constraint_set.weights[:, self.free]
        keep = np.any(W > 0, axis=1)
        self.W = W[keep]
        self.rhs = constraint_set.rhs(alpha0)[keep]
        self.basis = hermitian_basis(N)
        self.p = self.basis.shape[0]
        # row a holds vec(E_a); Tr(G E_a) = V[a] . vec(G^T)
        self.V = self.basis.reshape(self.p, N * N)
        self.VH = self.V.conj().T
        self.norms = np.einsum("kij,kij->k", self.basis.conj(), self.basis).real
        self.I_N = np.eye(N)
        self.slices = [slice(m * N, (m + 1) * N) for m in self.free]
        self.X_fixed = R_full + rate.assemble_distortion(D_fixed) + sigma2 * np.eye(self.M * N)
        for sl in self.slices:
            self.X_fixed[sl, sl] = R_full[sl, sl] + sigma2 * self.I_N
        self.B_diag = np.array([B[sl, sl] for sl in self.slices])
        self.D_fixed = [np.asarray(D) for D in D_fixed]
        self.Rs = np.array([R_blocks[m] for m in self.free]) + sigma2 * self.I_N
        if modified:
            self.A_free = np.array([A[m] for m in self.free])
            self.logdet_A = np.array([rate.logdet(A[m], "A_m") for m in self.free])

    def split(self, theta):
        return (theta.reshape(self.nf, self.p) @ self.V).reshape(self.nf, self.N, self.N)

    def join(self, blocks):
        blocks = np.asarray(blocks).reshape(len(blocks), self.N * self.N)
        return ((blocks @ self.V.conj().T).real / self.norms).reshape(-1)

    def full_blocks(self, free_blocks):
        out = list(self.D_fixed)
        for j, m in enumerate(self.free):
            out[m] = free_blocks[j]
        return out

    def _full_matrix(self, blocks):
        X = self.X_fixed.copy()
        for j, sl in enumerate(self.slices):
            X[sl, sl] += blocks[j]
        return X

    @staticmethod
    def _logdets(stack):
        C = np.linalg.cholesky(stack)
        return 2.0 * np.log(np.abs(np.diagonal(C, axis1=-2, axis2=-1))).sum(axis=-1)

    def rates(self, blocks, ld_D=None):
        """Natural-log rate surrogates for the free RUs, converted to bits."""
        if ld_D is None:
            ld_D = self._logdets(blocks)
        Z = self.Rs + blocks
        if self.modified:
            out = -self.logdet_A + np.einsum("kij,kji->k", self.A_free, Z).real - self.N - ld_D
        else:
            out = self._logdets(Z) - ld_D
        return out / LN2

    def objective(self, blocks):
        X = self._full_matrix(blocks)
        trBD = sum(np.einsum("ij,ji->", self.B_diag[j], blocks[j]).real for j in range(self.nf))
        fixed = sum(np.trace(self.B[m * self.N:(m + 1) * self.N, m * self.N:(m + 1) * self.N]
                             @ self.D_fixed[m]).real for m in range(self.M) if m not in self.free)
        return (self._logdets(X) - trBD - fixed) / LN2

    def barrier_value(self, theta, tau):
        """Barrier objective; -inf outside the strict interior."""
        blocks = self.split(theta)
        try:
            ld_D = self._logdets(blocks)
            f = self.objective(blocks)
            r = self.rates(blocks, ld_D)
        except np.linalg.LinAlgError:
            return -np.inf, None
        slack = self.rhs - self.c * (self.W @ r)
        if np.any(slack <= 0):
            return -np.inf, None
        return f + tau * (np.log(slack).sum() + ld_D.sum()), f

    def _cgrad(self, G):
        """Coordinate gradients for a stack of matrix gradients (.., N, N)."""
        G = np.swapaxes(G, -1, -2).reshape(-1, self.N * self.N)
        return (G @ self.V.T).real

    def _chess(self, P, Q):
        """Re Tr(P E_a Q E_b) for stacks P, Q of shape (b, N, N) -> (b, p, p)."""
        n = self.N
        K = np.swapaxes(P, -1, -2)[:, :, None, :, None] * Q[:, None, :, None, :]
        return (self.V @ K.reshape(-1, n * n, n * n) @ self.VH).real

    def derivatives(self, theta, tau):
        blocks = self.split(theta)
        p, nf = self.p, self.nf
        X_inv = np.linalg.inv(self._full_matrix(blocks))
        Xd = np.array([X_inv[sl, sl] for sl in self.slices])
        grad = self._cgrad(Xd - self.B_diag).reshape(-1) / LN2
        pairs = [(j, k) for j in range(nf) for k in range(j, nf)]
        Ps = np.array([X_inv[self.slices[k], self.slices[j]] for j, k in pairs])
        Qs = np.array([X_inv[self.slices[j], self.slices[k]] for j, k in pairs])
        hblocks = -self._chess(Ps, Qs) / LN2
        hess = np.empty((nf * p, nf * p))
        for (j, k), h in zip(pairs, hblocks):
            hess[j * p:(j + 1) * p, k * p:(k + 1) * p] = h
            hess[k * p:(k + 1) * p, j * p:(j + 1) * p] = h.T

        D_inv = np.linalg.inv(blocks)
        gD = self._cgrad(D_inv)
        HD = self._chess(D_inv, D_inv)
        if self.modified:
            r_grad_blocks = (self._cgrad(self.A_free) - gD) / LN2
            r_hess = HD / LN2
        else:
            Z_inv = np.linalg.inv(self.Rs + blocks)
            r_grad_blocks = (self._cgrad(Z_inv) - gD) / LN2
            r_hess = (HD - self._chess(Z_inv, Z_inv)) / LN2
        r_grad = np.zeros((nf, nf * p))
        ld_hess = np.zeros((nf * p, nf * p))
        for j in range(nf):
            sl = slice(j * p, (j + 1) * p)
            r_grad[j, sl] = r_grad_blocks[j]
            ld_hess[sl, sl] = -HD[j]

        r = self.rates(blocks)
        slack = self.rhs - self.c * (self.W @ r)
        g_lhs = self.c * (self.W @ r_grad)  # rows: constraints
        grad_b = -(g_lhs / slack[:, None]).sum(axis=0) + gD.reshape(-1)
        hess_b = -(g_lhs.T / slack**2) @ g_lhs + ld_hess
        coef = self.c * (self.W / slack[:, None]).sum(axis=0)  # per free RU
        for j in range(nf):
            sl = slice(j * p, (j + 1) * p)
            hess_b[sl, sl] -= coef[j] * r_hess[j]
        return grad + tau * grad_b, hess + tau * hess_b, grad


def _newton_direction(grad, hess):
    """Ascent direction: Newton when the Hessian is negative definite, else the gradient."""
    d = np.sqrt(np.abs(np.diag(hess)))
    d[d == 0] = 1.0
    Hs = -hess / np.outer(d, d)
    try:
        C = np.linalg.cholesky(Hs)
        step = np.linalg.solve(C.conj().T, np.linalg.solve(C, grad / d)) / d
        if np.all(np.isfinite(step)) and grad @ step > 0:
            return step, True
    except np.linalg.LinAlgError:
        pass
    return grad / (d * d), False


@dataclass
class SubproblemResult:
    D: list
    objective: float
    start_objective: float
    newton_steps: int
    stages: int
    decrement: float
    gap_bound: float
    stage_history: list
    kept_start: bool


def solve_convex_subproblem(alpha0, B_aux, A_list, realization, system, constraint_set, settings,
                            D_start, free=None, tau_start=None):
    """Maximize the D-step objective from a strictly feasible ``D_start``.

    Log-barrier path (tau_start, tau_factor, tau_floor) with damped Newton
    centering and Armijo backtracking.  The returned blocks never have a lower
    objective than ``D_start``.  ``tau_start`` overrides the settings value
    when ``D_start`` is already close to the central path (ACO warm starts).
    """
    # noise-normalized units: rates are invariant, the objective shifts by a constant
    s2 = system.sigma2
    Sigma = system.Sigma
    R_blocks = [rate.received_covariance(H, Sigma) / s2 for H in realization.H]
    R_full = rate.received_covariance(realization.H_stacked, Sigma) / s2
    M = realization.M
    free = list(range(M)) if free is None else list(free)
    D_start = [np.asarray(D, dtype=complex) / s2 for D in D_start]
    A_scaled = None if A_list is None else [np.asarray(A) * s2 for A in A_list]
    sub = _Subproblem(alpha0, R_full, R_blocks, 1.0, np.asarray(B_aux) * s2, A_scaled, constraint_set,
                      free, D_start, settings.modified)
    theta = sub.join([D_start[m] for m in free])
    start_blocks = sub.split(theta)
    tau = settings.tau_start if tau_start is None else tau_start
    val, f_start = sub.barrier_value(theta, tau)
    if not np.isfinite(val):
        raise InfeasibleError(f"start point is not strictly feasible at alpha0={alpha0:.4g}")

    n_barrier = len(sub.rhs) + len(free) * sub.N
    total_steps = 0
    stages = 0
    history = []
    lam2 = np.inf
    while True:
        stages += 1
        stage_vals = [val]
        for _ in range(settings.max_iter):
            g, Hm, _ = sub.derivatives(theta, tau)
            step, _newton = _newton_direction(g, Hm)
            slope = g @ step
            lam2 = slope
            if slope / 2.0 <= settings.inner_tol * max(1.0, abs(val)):
                break
            t = 1.0
            accepted = False
            for _ls in range(80):
                cand = theta + t * step
                cval, _ = sub.barrier_value(cand, tau)
                if np.isfinite(cval) and cval >= val + settings.armijo_c * t * slope:
                    accepted = True
                    break
                t *= settings.armijo_beta
            if not accepted:
                break
            theta, val = cand, cval
            stage_vals.append(val)
            total_steps += 1
        history.append(stage_vals)
        if tau <= settings.tau_floor:
            break
        tau = max(tau * settings.tau_factor, settings.tau_floor)
        val, _ = sub.barrier_value(theta, tau)

    blocks = sub.split(theta)
    f_end = sub.objective(blocks)
    kept = f_end < f_start
    if kept:
        blocks, f_end = start_blocks, f_start
    D_out = [s2 * D for D in sub.full_blocks([rate.hermitian(D) for D in blocks])]
    return SubproblemResult(D=D_out, objective=float(f_end), start_objective=float(f_start),
                            newton_steps=total_steps, stages=stages, decrement=float(lam2),
                            gap_bound=float(tau * n_barrier), stage_history=history, kept_start=kept)


# ---------------------------------------------------------------------------
# Inner loop

def fronthaul_rates(D_blocks, realization, system):
    return np.array([rate.fronthaul_mutual_information(realization.H[m], system.Sigma, D_blocks[m],
                                                       system.sigma2)
                     for m in range(realization.M)])


def initialize_distortion(alpha0, realization, capacities, system, settings, constraint_set=None,
                          free=None, D_fixed=None):
    """Smallest d = d0 * 2^k such that D = d I meets every constraint with 10% slack.

    Raises InfeasibleError once d exceeds 1e12 * sigma2.
    """
    cs = constraint_set or rate.build_subset_constraints(capacities, system.f_s, system.W_rf)
    M, N = realization.M, realization.N
    free = list(range(M)) if free is None else list(free)
    d = settings.d0 if settings.d0 is not None else system.sigma2
    cap = 1e12 * system.sigma2
    rows = np.any(cs.weights[:, free] > 0, axis=1)
    while d <= cap:
        D = [d * np.eye(N, dtype=complex) for _ in range(M)]
        if D_fixed is not None:
            for m in range(M):
                if m not in free:
                    D[m] = D_fixed[m]
        mi = np.zeros(M)
        mi[free] = [rate.fronthaul_mutual_information(realization.H[m], system.Sigma, D[m], system.sigma2)
                    for m in free]
        rhs = cs.rhs(alpha0)[rows]
        slack = rhs - cs.lhs(alpha0, mi)[rows]
        if np.all(rhs > 0) and np.all(slack >= 0.1 * rhs):
            return D
        d *= 2.0
    raise InfeasibleError(f"no feasible scaled-identity distortion at alpha0={alpha0:.4g}")


def evaluate_sum_rate(alpha0, D_blocks, realization, system):
    """alpha0 * W_rf * I(x; y_hat) in bits/s."""
    if alpha0 == 0:
        return 0.0
    D = rate.assemble_distortion(D_blocks)
    return alpha0 * system.W_rf * rate.access_mutual_information(realization.H_stacked, system.Sigma, D,
                                                                 system.sigma2)


def surrogate_objective(alpha0, D_blocks, B, realization, system):
    """T = alpha0 W_rf [log-det bracket] in bits/s."""
    D = rate.assemble_distortion(D_blocks)
    return alpha0 * system.W_rf * rate.surrogate_bracket(realization.H_stacked, system.Sigma, D, B,
                                                         system.sigma2)


def aco_inner(alpha0, realization, capacities, system, settings=None, constraint_set=None,
              D_init=None, free=None):
    """Alternating optimization of (B, A_m) in closed form and D by the barrier solver.

    Stops when consecutive surrogate values T differ by at most aco_epsilon.
    An alpha0 with no feasible start returns c_sum = 0 with status 'infeasible'.
    """
    settings = settings or SolverSettings()
    M, N = realization.M, realization.N
    cs = constraint_set or rate.build_subset_constraints(capacities, system.f_s, system.W_rf)
    free = list(range(M)) if free is None else list(free)
    if alpha0 <= 0:
        D = [system.sigma2 * np.eye(N, dtype=complex) for _ in range(M)]
        return AcoResult(alpha0=0.0, solution=QuantizationSolution(D=D), T=0.0, c_sum=0.0)
    if D_init is None:
        try:
            D = initialize_distortion(alpha0, realization, capacities, system, settings, cs)
        except InfeasibleError:
            D = [system.sigma2 * np.eye(N, dtype=complex) for _ in range(M)]
            return AcoResult(alpha0=alpha0, solution=QuantizationSolution(D=D), T=0.0, c_sum=0.0,
                             status="infeasible")
    else:
        D = [np.asarray(Dm, dtype=complex) for Dm in D_init]

    eps = settings.aco_epsilon_mbps * 1e6
    T_prev = 0.0
    history = []
    steps = 0
    B = A = None
    it = 0
    for it in range(1, settings.max_iter + 1):
        B = rate.optimal_B(rate.assemble_distortion(D), system.sigma2)
        A = [rate.optimal_A(realization.H[m], system.Sigma, D[m], system.sigma2) for m in range(M)]
        try:
            sub = solve_convex_subproblem(alpha0, B, A, realization, system, cs, settings, D, free=free,
                                          tau_start=None if it == 1 else max(settings.tau_warm, settings.tau_floor))
        except InfeasibleError:
            if it == 1:
                return AcoResult(alpha0=alpha0, solution=QuantizationSolution(D=D), T=0.0, c_sum=0.0,
                                 status="infeasible")
            break
        D = sub.D
        steps += sub.newton_steps
        T = surrogate_objective(alpha0, D, B, realization, system)
        history.append(T)
        if abs(T - T_prev) <= eps:
            break
        T_prev = T
    c_sum = evaluate_sum_rate(alpha0, D, realization, system)
    sol = QuantizationSolution(D=D, B_aux=B, A=A)
    return AcoResult(alpha0=alpha0, solution=sol, T=history[-1] if history else 0.0, c_sum=c_sum,
                     iterations=it, T_history=history, newton_steps=steps)


def aco_best_start(alpha0, realization, capacities, system, settings=None, constraint_set=None,
                   warm=None):
    """aco_inner from the default initializer and, when given, from ``warm``.

    ``warm`` is a solution found at a larger alpha0, which stays strictly
    feasible at this alpha0.  The better of the two runs is returned; the
    continuation start helps when the cold run stops at a weaker stationary point.
    """
    cold = aco_inner(alpha0, realization, capacities, system, settings, constraint_set)
    if warm is None or alpha0 <= 0:
        return cold
    hot = aco_inner(alpha0, realization, capacities, system, settings, constraint_set, D_init=warm)
    return hot if hot.feasible and hot.c_sum > cold.c_sum else cold


# ---------------------------------------------------------------------------
# Outer loop

def _value(res):
    return float(res.c_sum) if hasattr(res, "c_sum") else float(res)


def golden_section_search(evaluator, settings=None, extra_points=(1.0,)):
    """Maximize ``evaluator`` over alpha0 in [0, 1] by golden-section search.

    ``evaluator(alpha0)`` returns a float or an object with ``c_sum``.  After
    the interval shrinks below gss_epsilon the midpoint, the final interval
    ends and ``extra_points`` are compared and the best one is returned.
    """
    settings = settings or SolverSettings()
    cache = {}
    history = []

    def probe(a0):
        a0 = float(a0)
        if a0 not in cache:
            try:
                res = evaluator(a0)
            except ProbeError:
                raise
            except Exception as exc:
                raise ProbeError(a0, exc) from exc
            cache[a0] = res
            history.append((a0, _value(res)))
        return cache[a0]

    lo, hi = 0.0, 1.0
    x1, x2 = lo + RHO * (hi - lo), hi - RHO * (hi - lo)
    f1, f2 = _value(probe(x1)), _value(probe(x2))
    iterations = 0
    while True:
        iterations += 1
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            if hi - lo <= settings.gss_epsilon:
                break
            x1 = lo + RHO * (hi - lo)
            f1 = _value(probe(x1))
        else:
            lo, x1, f1 = x1, x2, f2
            if hi - lo <= settings.gss_epsilon:
                break
            x2 = hi - RHO * (hi - lo)
            f2 = _value(probe(x2))
    candidates = [0.5 * (lo + hi), lo, hi, *extra_points]
    best_a, best_v = None, -np.inf
    for a0 in candidates:
        v = _value(probe(a0))
        if v > best_v:
            best_a, best_v = float(a0), v
    return GSSResult(alpha0=best_a, value=best_v, payload=cache[best_a], iterations=iterations,
                     evaluations=len(cache), history=history, evaluated=cache)


def recover_alpha(alpha0, D_blocks, realization, capacities, system, tol=1e-6):
    """Smallest RF fronthaul time fractions that carry each RU's compressed stream."""
    if alpha0 <= 0:
        return TimeAllocation(alpha0=0.0, alpha_m=np.zeros(realization.M))
    mi = fronthaul_rates(D_blocks, realization, system)
    c_rf = np.maximum(np.asarray(capacities.c_rf, dtype=float), 1e-6 * system.W_rf)
    alpha_m = np.maximum(0.0, (alpha0 * system.f_s * mi - np.asarray(capacities.c_fso)) / c_rf)
    if alpha_m.sum() > 1.0 - alpha0 + tol:
        raise ConsistencyError(f"recovered RF time {alpha_m.sum():.6g} exceeds budget {1 - alpha0:.6g}")
    return TimeAllocation(alpha0=float(alpha0), alpha_m=alpha_m)


def optimize_sum_rate(realization, capacities, system, settings=None, fso_only=None):
    """Hybrid scheme: golden-section search over alpha0 with the ACO inner loop.

    ``fso_only`` is an FSO-VQ baseline result for the same realization; it is
    computed when not supplied and competes as the alpha0 = 1 candidate, so the
    hybrid result never falls below the FSO-only vector quantizer.
    """
    from .baselines import fso_vq

    settings = settings or SolverSettings()
    cs = rate.build_subset_constraints(capacities, system.f_s, system.W_rf)

    solved = {}

    def evaluator(a0):
        above = [a for a in solved if a > a0]
        warm = solved[min(above)].solution.D if above else None
        res = aco_best_start(a0, realization, capacities, system, settings, cs, warm=warm)
        if res.feasible:
            solved[a0] = res
        return res

    gss = golden_section_search(evaluator, settings)
    best = gss.payload
    alpha0 = gss.alpha0
    c_sum = best.c_sum
    D = best.solution.D
    source = "gss"
    if fso_only is None:
        fso_only = fso_vq(realization, capacities, system, settings)
    if fso_only.c_sum > c_sum:
        alpha0, c_sum, D, source = 1.0, fso_only.c_sum, fso_only.D, "fso_vq"
    allocation = recover_alpha(alpha0, D, realization, capacities, system)
    mi = fronthaul_rates(D, realization, system) if alpha0 > 0 else np.zeros(realization.M)
    _, worst = rate.subset_feasible(alpha0, mi, cs)
    aco_iters = [getattr(r, "iterations", 0) for _, r in sorted(gss.evaluated.items())]
    diagnostics = {
        "iters_gss": gss.iterations,
        "gss_evaluations": gss.evaluations,
        "iters_aco": best.iterations if source == "gss" else 0,
        "aco_iterations_all": aco_iters,
        "worst_slack": worst,
        "T": best.T if source == "gss" else float("nan"),
        "source": source,
        "history": gss.history,
    }
    return SumRateResult(c_sum=float(c_sum), allocation=allocation,
                         solution=QuantizationSolution(D=D, B_aux=best.solution.B_aux, A=best.solution.A),
                         diagnostics=diagnostics)

