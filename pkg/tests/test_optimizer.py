import math
from dataclasses import replace

import numpy as np
import pytest
from conftest import make_case, random_hpd, scalar_case, scalar_grid_oracle

from cranfso import optimizer as opt
from cranfso import rate
from cranfso.capacity import LinkCapacities
from cranfso.channel import ChannelRealization, SystemConfig
from cranfso.errors import ConsistencyError, InfeasibleError, ProbeError


def test_settings_validation():
    with pytest.raises(ValueError):
        opt.SolverSettings(gss_epsilon=1.0)
    with pytest.raises(ValueError):
        opt.SolverSettings(tau_factor=1.5)
    with pytest.raises(ValueError):
        opt.SolverSettings(aco_epsilon_mbps=0)


def test_golden_constants():
    assert opt.RHO == pytest.approx(0.381966, abs=1e-6)
    assert 1 - opt.RHO == pytest.approx(1 / opt.GOLDEN_RATIO)


def test_gss_quadratic():
    res = opt.golden_section_search(lambda a: -(a - 0.3) ** 2)
    assert abs(res.alpha0 - 0.3) <= 0.02


def test_gss_monotone_returns_endpoint():
    res = opt.golden_section_search(lambda a: a)
    assert res.alpha0 == 1.0


@pytest.mark.parametrize("eps", [0.02, 0.05, 0.001])
def test_gss_iteration_count(eps):
    res = opt.golden_section_search(lambda a: -(a - 0.7) ** 2, opt.SolverSettings(gss_epsilon=eps))
    assert res.iterations == math.ceil(math.log(eps) / math.log(1 - opt.RHO))
    # two opening probes plus one per further iteration plus the final candidates
    assert res.evaluations <= 2 + (res.iterations - 1) + 4


def test_gss_probe_points_follow_golden_ratio():
    res = opt.golden_section_search(lambda a: -(a - 0.3) ** 2)
    (a1, _), (a2, _) = res.history[:2]
    assert a1 == pytest.approx(opt.RHO) and a2 == pytest.approx(1 - opt.RHO)


def test_gss_error_carries_probe():
    def bad(a):
        if a > 0.5:
            raise RuntimeError("boom")
        return -a

    with pytest.raises(ProbeError) as info:
        opt.golden_section_search(bad)
    assert info.value.alpha0 == pytest.approx(1 - opt.RHO)
    assert isinstance(info.value.cause, RuntimeError)


def scalar_unit_case(c_fso, c_rf, P=3.0):
    system = SystemConfig(K=1, M=1, N=1, L=1, P_k=(P,), sigma2=1.0)
    real = ChannelRealization(H=(np.ones((1, 1), complex),), F=(np.ones((1, 1)),), g=np.ones(1))
    return real, LinkCapacities(c_fso=np.array([c_fso]), c_rf=np.array([c_rf])), system


def test_evaluate_sum_rate_examples():
    real, _, system = scalar_unit_case(1.0, 1.0)
    D = [np.zeros((1, 1), complex)]
    assert opt.evaluate_sum_rate(1.0, D, real, system) == pytest.approx(80e6)
    assert opt.evaluate_sum_rate(0.0, D, real, system) == 0.0
    D = [np.full((1, 1), 0.7 + 0j)]
    assert opt.evaluate_sum_rate(0.6, D, real, system) == pytest.approx(2 * opt.evaluate_sum_rate(0.3, D, real, system))


def test_recover_alpha_examples():
    real, caps, system = scalar_unit_case(10e6, 100e6, P=3.0)
    system = replace(system, f_s=40e6)
    # alpha0 f_s I = 30 Mbps at alpha0 = 0.5 needs I = 1.5 bits: log2(1 + 4/d) = 1.5
    d = 4.0 / (2 ** 1.5 - 1)
    al = opt.recover_alpha(0.5, [np.full((1, 1), d + 0j)], real, caps, system)
    assert al.alpha_m[0] == pytest.approx(0.2)
    assert al.idle == pytest.approx(0.3)
    big = LinkCapacities(c_fso=np.array([1e12]), c_rf=np.array([1e6]))
    assert np.all(opt.recover_alpha(0.5, [np.full((1, 1), d + 0j)], real, big, system).alpha_m == 0)
    assert np.all(opt.recover_alpha(0.0, [np.zeros((1, 1), complex)], real, caps, system).alpha_m == 0)
    tiny = LinkCapacities(c_fso=np.array([0.0]), c_rf=np.array([1e6]))
    with pytest.raises(ConsistencyError):
        opt.recover_alpha(0.5, [np.full((1, 1), d + 0j)], real, tiny, system)


def test_initialize_distortion_examples(desk):
    real, caps = make_case(desk, 1)
    s = opt.SolverSettings()
    huge = LinkCapacities(c_fso=np.full(2, 1e15), c_rf=caps.c_rf)
    D = opt.initialize_distortion(0.5, real, huge, desk.system, s)
    assert np.allclose(D[0], desk.system.sigma2 * np.eye(2))
    zero = LinkCapacities(c_fso=np.zeros(2), c_rf=caps.c_rf)
    with pytest.raises(InfeasibleError):
        opt.initialize_distortion(1.0, real, zero, desk.system, s)


def test_initialize_distortion_scalar_slack():
    real, caps, system = scalar_unit_case(20e6, 50e6)
    D = opt.initialize_distortion(0.6, real, caps, system, opt.SolverSettings())
    d = D[0][0, 0].real
    need = 0.6 * system.f_s * np.log2(1 + 4.0 / d)
    budget = 0.4 * 50e6 + 20e6
    assert need <= 0.9 * budget
    # the previous doubling step was not good enough
    assert 0.6 * system.f_s * np.log2(1 + 4.0 / (d / 2)) > 0.9 * budget


def test_hermitian_coords_roundtrip():
    rng = np.random.default_rng(0)
    basis = opt.hermitian_basis(3)
    X = random_hpd(rng, 3)
    theta = opt.to_coords(X, basis)
    assert theta.shape == (9,) and np.isrealobj(theta)
    assert np.allclose(opt.from_coords(theta, basis), X)


def test_unconstrained_subproblem_first_order_condition(desk):
    real, caps = make_case(desk, 2)
    s2 = desk.system.sigma2
    huge = LinkCapacities(c_fso=np.full(2, 1e15), c_rf=caps.c_rf)
    cs = rate.build_subset_constraints(huge, desk.system.f_s, desk.system.W_rf)
    rng = np.random.default_rng(2)
    target = [s2 * random_hpd(rng, 2, shift=0.5) for _ in range(2)]
    R = rate.received_covariance(real.H_stacked, desk.system.Sigma)
    B = np.linalg.inv(R + rate.assemble_distortion(target) + s2 * np.eye(4))
    D0 = [10 * s2 * np.eye(2, dtype=complex)] * 2
    A = [rate.optimal_A(real.H[m], desk.system.Sigma, D0[m], s2) for m in range(2)]
    res = opt.solve_convex_subproblem(0.5, B, A, real, desk.system, cs, opt.SolverSettings(), D0)
    X = np.linalg.inv(R + rate.assemble_distortion(res.D) + s2 * np.eye(4))
    assert np.linalg.norm(X - B) <= 1e-4 * np.linalg.norm(B)
    for stage in res.stage_history:
        assert np.all(np.diff(stage) >= -1e-9 * np.abs(stage[1:]))


def test_subproblem_scalar_grid():
    rng = np.random.default_rng(3)
    for _ in range(5):
        real, caps, system = scalar_case(rng)
        cs = rate.build_subset_constraints(caps, system.f_s, system.W_rf)
        s = opt.SolverSettings()
        a0 = 0.4
        D0 = opt.initialize_distortion(a0, real, caps, system, s, cs)
        B = rate.optimal_B(D0[0], system.sigma2)
        A = [rate.optimal_A(real.H[0], system.Sigma, D0[0], system.sigma2)]
        res = opt.solve_convex_subproblem(a0, B, A, real, system, cs, s, D0)
        # 1-D grid over d of the same objective, feasible w.r.t. the same bound
        S = float(rate.received_covariance(real.H[0], system.Sigma)[0, 0].real)
        s2, b, a = system.sigma2, B[0, 0].real, A[0][0, 0].real
        d = np.logspace(np.log10(s2) - 6, np.log10(s2) + 10, 20001)
        obj = a0 * system.W_rf * (np.log2(S + d + s2) + np.log2(b) - b * (d + s2) / np.log(2))
        rub = np.log2(1 / a) - np.log2(d) + (a * (S + d + s2) - 1) / np.log(2)
        ok = a0 * system.f_s * rub <= (1 - a0) * caps.c_rf[0] + caps.c_fso[0]
        grid = obj[ok].max()
        got = a0 * system.W_rf * (np.log2(S + res.D[0][0, 0].real + s2) + np.log2(b)
                                  - b * (res.D[0][0, 0].real + s2) / np.log(2))
        assert abs(got - grid) <= 0.01 * abs(grid)


def test_aco_alpha0_zero(desk):
    real, caps = make_case(desk, 3)
    res = opt.aco_inner(0.0, real, caps, desk.system)
    assert res.c_sum == 0.0 and res.feasible


def test_aco_infeasible_flag(desk):
    real, caps = make_case(desk, 3)
    zero = LinkCapacities(c_fso=np.zeros(2), c_rf=caps.c_rf)
    res = opt.aco_inner(1.0, real, zero, desk.system)
    assert res.c_sum == 0.0 and res.status == "infeasible"


@pytest.mark.parametrize("modified", [True, False])
def test_aco_monotone_and_terminates(desk, modified):
    s = opt.SolverSettings(modified=modified)
    for seed in (4, 5):
        real, caps = make_case(desk, seed, kappa=42e-3)
        res = opt.aco_inner(0.5, real, caps, desk.system, s)
        T = np.array(res.T_history)
        assert res.feasible and res.iterations < s.max_iter
        assert np.all(np.diff(T) >= -1e-9 * np.abs(T[1:]))
        assert abs(T[-1] - T[-2]) <= s.aco_epsilon_mbps * 1e6
        mi = opt.fronthaul_rates(res.solution.D, real, desk.system)
        cs = rate.build_subset_constraints(caps, desk.system.f_s, desk.system.W_rf)
        assert rate.subset_feasible(0.5, mi, cs, tol=1e-6)[0]


def test_aco_unconstrained_limit(desk):
    real, caps = make_case(desk, 6)
    huge = LinkCapacities(c_fso=np.full(2, 1e15), c_rf=caps.c_rf)
    res = opt.aco_inner(0.7, real, huge, desk.system)
    D0 = [1e-6 * desk.system.sigma2 * np.eye(2)] * 2
    top = opt.evaluate_sum_rate(0.7, D0, real, desk.system)
    assert res.c_sum == pytest.approx(top, rel=1e-3)
    T = np.array(res.T_history)
    assert np.all(np.diff(T) >= -1e-9 * np.abs(T[1:]))


def test_aco_scalar_fixed_alpha0_grid():
    rng = np.random.default_rng(7)
    for _ in range(5):
        real, caps, system = scalar_case(rng)
        a0 = 0.5
        res = opt.aco_inner(a0, real, caps, system)
        S = float(rate.received_covariance(real.H[0], system.Sigma)[0, 0].real)
        s2 = system.sigma2
        d = np.logspace(np.log10(s2) - 8, np.log10(s2) + 12, 10000)
        ok = a0 * system.f_s * np.log2(1 + (S + s2) / d) <= (1 - a0) * caps.c_rf[0] + caps.c_fso[0]
        grid = (a0 * system.W_rf * np.log2(1 + S / (d + s2)))[ok].max()
        assert res.c_sum == pytest.approx(grid, rel=0.01)


def test_optimize_sum_rate_scalar_oracle():
    rng = np.random.default_rng(11)
    for _ in range(3):
        real, caps, system = scalar_case(rng)
        res = opt.optimize_sum_rate(real, caps, system)
        best, _, _ = scalar_grid_oracle(real, caps, system)
        assert res.c_sum == pytest.approx(best, rel=0.01)


def test_optimize_sum_rate_output_feasible(desk):
    real, caps = make_case(desk, 8, kappa=42e-3)
    res = opt.optimize_sum_rate(real, caps, desk.system)
    a0 = res.allocation.alpha0
    assert res.c_sum >= 0
    assert a0 + res.allocation.alpha_m.sum() <= 1 + 1e-9
    mi = opt.fronthaul_rates(res.solution.D, real, desk.system)
    cs = rate.build_subset_constraints(caps, desk.system.f_s, desk.system.W_rf)
    assert rate.subset_feasible(a0, mi, cs, tol=1e-6)[0]
    assert rate.minimal_time_feasible(a0, mi * (1 - 1e-9), caps, desk.system.f_s)[0]
    d = res.diagnostics
    assert d["iters_gss"] == 9 and d["source"] in ("gss", "fso_vq")
