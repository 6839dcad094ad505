"""Smooth solvers: Tikhonov problem, acceleration schemes, restart."""

import numpy as np
import pytest

from varimg import _accel, grid, smooth

from dense_ops import laplacian_matrix


def _noisy(shape=(16, 16), seed=0):
    rng = np.random.default_rng(seed)
    return rng.random(shape)


def iters_to(trace, target):
    """First logged iteration whose relative suboptimality is <= target."""
    f = np.array(trace.objective)
    fstar = f.min()
    rel = (f - fstar) / max(f[0] - fstar, 1e-300)
    hits = np.nonzero(rel <= target)[0]
    return trace.iters[hits[0]] if hits.size else np.inf


def test_theta_recursion_solves_quadratic():
    theta = 1.0
    for q in (0.0, 0.1, 1.0):
        th = theta
        for _ in range(50):
            nxt = _accel.theta_next(th, q)
            assert abs(_accel.theta_residual(th, nxt, q)) < 1e-12
            assert 0.0 < nxt <= 1.0
            th = nxt


def test_q0_recursion_equals_fista_rule():
    # theta_k = 1/t_k maps the variable recursion onto the familiar
    # t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2 momentum rule.
    theta, t = 1.0, 1.0
    for _ in range(30):
        theta_new = _accel.theta_next(theta, 0.0)
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        beta_rec = theta * (1.0 - theta) / (theta * theta + theta_new)
        beta_fista = (t - 1.0) / t_new
        assert abs(beta_rec - beta_fista) < 1e-12
        theta, t = theta_new, t_new


def test_tikhonov_analytic_matches_dense_solve():
    f = _noisy((5, 6))
    lam = 2.5
    A = np.eye(30) - lam * laplacian_matrix(5, 6, "symmetric")
    want = np.linalg.solve(A, f.ravel()).reshape(5, 6)
    np.testing.assert_allclose(smooth.tikhonov_analytic(f, lam), want,
                               atol=1e-10)


def test_tikhonov_gradient_finite_difference():
    f = _noisy((4, 4), seed=3)
    prob = smooth.tikhonov_problem(f, 1.7)
    rng = np.random.default_rng(5)
    u = rng.standard_normal((4, 4))
    d = rng.standard_normal((4, 4))
    eps = 1e-6
    fd = (prob.value(u + eps * d) - prob.value(u - eps * d)) / (2 * eps)
    assert abs(fd - grid.inner(prob.grad(u), d)) < 1e-6


def test_tikhonov_constants():
    prob = smooth.tikhonov_problem(np.zeros((4, 4)), 10.0)
    assert prob.lipschitz == 81.0
    assert prob.mu == 1.0
    assert prob.condition_number == 81.0


def test_analytic_is_stationary_and_solvers_reach_it():
    f = _noisy(seed=1)
    lam = 10.0
    prob = smooth.tikhonov_problem(f, lam)
    ustar = smooth.tikhonov_analytic(f, lam)
    assert np.linalg.norm(prob.grad(ustar)) < 1e-10
    t = 1.0 / prob.lipschitz
    for solver in (
        lambda: smooth.gradient_descent(prob, f, t, 4000),
        lambda: smooth.nesterov_scheme1(prob, f, t, 1.0 / prob.condition_number, 600),
        lambda: smooth.nesterov_scheme2(prob, f, t, 600),
        lambda: smooth.nesterov_restart(prob, f, t, 600),
    ):
        u, _ = solver()
        assert np.abs(u - ustar).max() <= 1e-6


def test_scheme1_q1_is_gradient_descent():
    f = _noisy(seed=2)
    prob = smooth.tikhonov_problem(f, 3.0)
    t = 1.0 / prob.lipschitz
    u_gd, tr_gd = smooth.gradient_descent(prob, f, t, 30)
    u_n, tr_n = smooth.nesterov_scheme1(prob, f, t, 1.0, 30)
    np.testing.assert_array_equal(u_gd, u_n)
    np.testing.assert_array_equal(tr_gd.objective, tr_n.objective)


def test_scheme2_beta_star():
    prob = smooth.tikhonov_problem(np.zeros((4, 4)), 10.0)  # kappa = 81
    root = np.sqrt(prob.mu / prob.lipschitz)
    assert abs((1.0 - root) / (1.0 + root) - 0.8) < 1e-12


def test_scheme2_requires_known_mu():
    prob = smooth.SmoothProblem(value=lambda u: 0.0,
                                grad=lambda u: np.zeros_like(u),
                                lipschitz=1.0, mu=0.0)
    with pytest.raises(ValueError):
        smooth.nesterov_scheme2(prob, np.zeros((2, 2)), 1.0, 5)


def test_gd_rejects_oversized_step():
    prob = smooth.tikhonov_problem(np.zeros((4, 4)), 1.0)
    with pytest.raises(ValueError):
        smooth.gradient_descent(prob, np.zeros((4, 4)), 1.0, 5)


def test_gd_monotone_decrease():
    f = _noisy(seed=4)
    prob = smooth.tikhonov_problem(f, 5.0)
    _, tr = smooth.gradient_descent(prob, f, 1.0 / prob.lipschitz, 100)
    assert np.all(np.diff(tr.objective) <= 1e-14)


def test_restart_fires_and_beats_plain_acceleration():
    f = _noisy((32, 32), seed=6)
    prob = smooth.tikhonov_problem(f, 10.0)
    t = 1.0 / prob.lipschitz
    _, tr_r = smooth.nesterov_restart(prob, f, t, 200)
    _, tr_p = smooth.nesterov_scheme1(prob, f, t, 0.0, 200)
    assert tr_r.restart_count >= 1
    assert iters_to(tr_r, 1e-3) <= iters_to(tr_p, 1e-3)
    # Restart safety: final objective no worse than without restart.
    assert tr_r.objective[-1] <= tr_p.objective[-1] + 1e-12


def test_restart_modes_comparable():
    f = _noisy((32, 32), seed=8)
    prob = smooth.tikhonov_problem(f, 10.0)
    t = 1.0 / prob.lipschitz
    _, tr_g = smooth.nesterov_restart(prob, f, t, 400, mode="gradient")
    _, tr_o = smooth.nesterov_restart(prob, f, t, 400, mode="objective")
    kg, ko = iters_to(tr_g, 1e-3), iters_to(tr_o, 1e-3)
    assert kg <= 2 * ko and ko <= 2 * kg


def test_restart_at_optimum_is_inert():
    # A constant image is an exactly representable optimum: the gradient is
    # identically zero, so the iteration must not move or restart.
    f = np.full((8, 8), 0.4)
    prob = smooth.tikhonov_problem(f, 4.0)
    u, tr = smooth.nesterov_restart(prob, f, 1.0 / prob.lipschitz, 50)
    np.testing.assert_array_equal(u, f)
    assert tr.restart_count == 0


def test_restart_near_optimum_stays_put():
    f = _noisy(seed=9)
    lam = 4.0
    ustar = smooth.tikhonov_analytic(f, lam)
    prob = smooth.tikhonov_problem(f, lam)
    u, _ = smooth.nesterov_restart(prob, ustar, 1.0 / prob.lipschitz, 50)
    assert np.abs(u - ustar).max() < 1e-12


def test_beta_trajectory_nondecreasing_without_restart():
    theta = 1.0
    betas = []
    for _ in range(100):
        theta_new = _accel.theta_next(theta, 0.0)
        betas.append(theta * (1.0 - theta) / (theta * theta + theta_new))
        theta = theta_new
    assert np.all(np.diff(betas) >= -1e-15)
    # kappa = 81: beta eventually exceeds the optimal beta* = 0.8.
    assert betas[-1] > 0.8


def test_theorem_envelopes_small():
    f = _noisy((12, 12), seed=10)
    lam = 10.0
    prob = smooth.tikhonov_problem(f, lam)
    ustar = smooth.tikhonov_analytic(f, lam)
    fstar = prob.value(ustar)
    d0 = grid.norm_sq(f - ustar)
    t = 1.0 / prob.lipschitz
    _, tr_gd = smooth.gradient_descent(prob, f, t, 300)
    for k, val in zip(tr_gd.iters[1:], tr_gd.objective[1:]):
        assert val - fstar <= d0 / (2.0 * t * k) + 1e-12
    _, tr_s2 = smooth.nesterov_scheme2(prob, f, t, 100)
    rate = 1.0 - np.sqrt(prob.mu / prob.lipschitz)
    for k, val in zip(tr_s2.iters, tr_s2.objective):
        bound = prob.lipschitz * rate ** k * d0
        assert val - fstar <= bound + 1e-12
