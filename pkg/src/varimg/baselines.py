"""Comparison solvers: ADMM splitting and the Chambolle–Pock primal-dual method.

Both families solve the same TV/TSV denoising problems as the accelerated
dual solvers and are used for cross-solver agreement checks.  The quadratic
subproblems are solved exactly through the spectral module.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import composite, grid, spectral
from .composite import ISOTROPIC, project_unit_ball, soft_shrink
from .grid import SYMMETRIC
from .trace import Trace


@dataclass
class AdmmConfig:
    """Penalty and budget for the alternating direction method."""

    rho: float = 4.0
    n_iters: int = 500
    tol: float | None = None
    log_every: int = 1

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError(f"need rho > 0, got {self.rho}")


@dataclass
class PdConfig:
    """Primal-dual step sizes; ``tau * sigma * L**2`` may not exceed 1."""

    tau: float | None = None
    sigma: float | None = None
    theta: float = 1.0
    n_iters: int = 500
    log_every: int = 1

    def resolve(self, lipschitz: float) -> tuple[float, float]:
        tau = 1.0 / lipschitz if self.tau is None else self.tau
        sigma = 1.0 / lipschitz if self.sigma is None else self.sigma
        if tau <= 0 or sigma <= 0:
            raise ValueError("step sizes must be positive")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")
        if tau * sigma * lipschitz * lipschitz > 1.0 + 1e-12:
            raise ValueError(
                f"tau*sigma*L^2 = {tau * sigma * lipschitz * lipschitz} "
                "exceeds 1; no convergence guarantee")
        return tau, sigma


def admm_tv(f: np.ndarray, lam: float, cfg: AdmmConfig | None = None,
            variant: str = ISOTROPIC, boundary: str = SYMMETRIC,
            return_state: bool = False):
    """TV denoising by ADMM with the splitting ``w = grad u``.

    The u-update solves ``(I + rho grad^T grad) u = f + rho grad^T (w - q)``
    spectrally, the w-update is soft shrinkage with threshold ``lam/rho``,
    and q is the scaled dual variable.  The trace's grad_norm column records
    the primal residual ``||grad u - w||``.
    """
    cfg = AdmmConfig() if cfg is None else cfg
    if lam <= 0:
        raise ValueError(f"need lam > 0, got {lam}")
    f = np.asarray(f, dtype=np.float64)
    rho = cfg.rho
    u = f.copy()
    w = grid.gradient(u, boundary)
    q = np.zeros_like(w)
    trace = Trace()
    t0 = time.perf_counter()
    trace.append(0, composite.tv_primal_value(u, f, lam, variant, boundary))
    residuals = []
    for k in range(cfg.n_iters):
        rhs = f - rho * grid.divergence(w - q, boundary)
        u = spectral.solve_screened_laplacian(rhs, 1.0, rho, boundary)
        gu = grid.gradient(u, boundary)
        w_old = w
        w = soft_shrink(gu + q, lam / rho, variant)
        q = q + gu - w
        r_primal = float(np.linalg.norm(gu - w))
        r_dual = rho * float(np.linalg.norm(grid.divergence(w - w_old, boundary)))
        residuals.append((r_primal, r_dual))
        if (k + 1) % cfg.log_every == 0 or k + 1 == cfg.n_iters:
            trace.append(k + 1,
                         composite.tv_primal_value(u, f, lam, variant, boundary),
                         grad_norm=r_primal,
                         elapsed_ms=(time.perf_counter() - t0) * 1e3)
        if cfg.tol is not None and r_primal < cfg.tol and r_dual < cfg.tol:
            break
    if return_state:
        return u, trace, {"w": w, "q": q, "residuals": residuals}
    return u, trace


def admm_tsv(f: np.ndarray, lam: float, beta: float, gamma: float = 1.0,
             cfg: AdmmConfig | None = None, variant: str = ISOTROPIC,
             boundary: str = SYMMETRIC, return_state: bool = False):
    """TSV denoising by ADMM with the splitting ``z = grad u - w``.

    The u- and w-updates are exact quadratic solves (full-plane and one-axis
    spectral systems respectively); the z-update is soft shrinkage with
    threshold ``lam/rho``.
    """
    cfg = AdmmConfig() if cfg is None else cfg
    if lam <= 0 or beta <= 0 or gamma <= 0:
        raise ValueError("lam, beta and gamma must all be positive")
    f = np.asarray(f, dtype=np.float64)
    rho = cfg.rho
    u = f.copy()
    w = np.zeros_like(grid.gradient(u, boundary))
    z = grid.gradient(u, boundary) - w
    q = np.zeros_like(w)
    trace = Trace()
    t0 = time.perf_counter()
    trace.append(0, composite.tsv_objective(u, w, f, lam, beta, gamma,
                                            variant, boundary))
    residuals = []
    for k in range(cfg.n_iters):
        rhs = f - rho * grid.divergence(w + z - q, boundary)
        u = spectral.solve_screened_laplacian(rhs, 1.0, rho, boundary)
        gu = grid.gradient(u, boundary)
        c = gu - z + q
        w = np.empty_like(c)
        w[..., 0, :, :] = spectral.solve_axis_screened(
            rho * c[..., 0, :, :], "x", gamma + rho, beta, boundary)
        w[..., 1, :, :] = spectral.solve_axis_screened(
            rho * c[..., 1, :, :], "y", gamma + rho, beta, boundary)
        z_old = z
        z = soft_shrink(gu - w + q, lam / rho, variant)
        q = q + gu - w - z
        r_primal = float(np.linalg.norm(gu - w - z))
        r_dual = rho * float(np.linalg.norm(grid.divergence(z - z_old, boundary)))
        residuals.append((r_primal, r_dual))
        if (k + 1) % cfg.log_every == 0 or k + 1 == cfg.n_iters:
            trace.append(k + 1,
                         composite.tsv_objective(u, w, f, lam, beta, gamma,
                                                 variant, boundary),
                         grad_norm=r_primal,
                         elapsed_ms=(time.perf_counter() - t0) * 1e3)
        if cfg.tol is not None and r_primal < cfg.tol and r_dual < cfg.tol:
            break
    if return_state:
        return u, trace, {"w": w, "z": z, "q": q, "residuals": residuals}
    return u, trace


def _tree_op(fn, *xs):
    if isinstance(xs[0], tuple):
        return tuple(_tree_op(fn, *parts) for parts in zip(*xs))
    return fn(*xs)


def chambolle_pock(x0, p0, K, K_adj, prox_primal, prox_dual, lipschitz,
                   cfg: PdConfig | None = None, objective=None):
    """Generic primal-dual iteration (dual ascent, primal descent, relax).

    ``x`` may be a single array or a tuple of arrays; ``K``/``K_adj`` map
    between the primal and dual spaces with operator norm ``lipschitz``.
    """
    cfg = PdConfig() if cfg is None else cfg
    tau, sigma = cfg.resolve(lipschitz)
    x = _tree_op(lambda a: np.array(a, dtype=np.float64, copy=True), x0)
    p = np.array(p0, dtype=np.float64, copy=True)
    xbar = x
    trace = Trace()
    t0 = time.perf_counter()
    if objective is not None:
        trace.append(0, objective(x))
    for k in range(cfg.n_iters):
        p = prox_dual(p + sigma * K(xbar), sigma)
        kp = K_adj(p)
        x_new = prox_primal(_tree_op(lambda a, b: a - tau * b, x, kp), tau)
        xbar = _tree_op(lambda a, b: a + cfg.theta * (a - b), x_new, x)
        x = x_new
        if objective is not None and ((k + 1) % cfg.log_every == 0
                                      or k + 1 == cfg.n_iters):
            trace.append(k + 1, objective(x),
                         elapsed_ms=(time.perf_counter() - t0) * 1e3)
    return x, p, trace


def chambolle_pock_tv(f: np.ndarray, lam: float, cfg: PdConfig | None = None,
                      variant: str = ISOTROPIC, boundary: str = SYMMETRIC):
    """Primal-dual TV denoising: ``K = lam * grad``, ``L = lam * sqrt(8)``.

    Dual prox is the unit-ball projection; the quadratic data term has the
    closed-form prox ``(u + tau f) / (1 + tau)``.
    """
    if lam <= 0:
        raise ValueError(f"need lam > 0, got {lam}")
    f = np.asarray(f, dtype=np.float64)
    L = lam * np.sqrt(8.0)

    def K(u):
        return lam * grid.gradient(u, boundary)

    def K_adj(p):
        return -lam * grid.divergence(p, boundary)

    def prox_primal(u, tau):
        return (u + tau * f) / (1.0 + tau)

    def prox_dual(p, sigma):
        return project_unit_ball(p, variant)

    def objective(u):
        return composite.tv_primal_value(u, f, lam, variant, boundary)

    p0 = np.zeros_like(grid.gradient(f, boundary))
    u, p, trace = chambolle_pock(f, p0, K, K_adj, prox_primal, prox_dual, L,
                                 cfg, objective=objective)
    return u, trace


def chambolle_pock_tsv(f: np.ndarray, lam: float, beta: float,
                       gamma: float = 1.0, cfg: PdConfig | None = None,
                       variant: str = ISOTROPIC, boundary: str = SYMMETRIC):
    """Primal-dual TSV denoising with the joint primal (u, w).

    ``K(u, w) = lam (grad u - w)`` has operator norm at most
    ``lam (sqrt(8) + 1)``; the w-prox is a one-axis spectral solve of
    ``((gamma + 1/tau) I + beta d^T d) w = w'/tau``.
    """
    if lam <= 0 or beta <= 0 or gamma <= 0:
        raise ValueError("lam, beta and gamma must all be positive")
    f = np.asarray(f, dtype=np.float64)
    L = lam * (np.sqrt(8.0) + 1.0)

    def K(x):
        u, w = x
        return lam * (grid.gradient(u, boundary) - w)

    def K_adj(q):
        return (-lam * grid.divergence(q, boundary), -lam * q)

    def prox_primal(x, tau):
        uz, wz = x
        u = (uz + tau * f) / (1.0 + tau)
        w = np.empty_like(wz)
        w[..., 0, :, :] = spectral.solve_axis_screened(
            wz[..., 0, :, :] / tau, "x", gamma + 1.0 / tau, beta, boundary)
        w[..., 1, :, :] = spectral.solve_axis_screened(
            wz[..., 1, :, :] / tau, "y", gamma + 1.0 / tau, beta, boundary)
        return (u, w)

    def prox_dual(q, sigma):
        return project_unit_ball(q, variant)

    def objective(x):
        u, w = x
        return composite.tsv_objective(u, w, f, lam, beta, gamma, variant,
                                       boundary)

    w0 = np.zeros_like(grid.gradient(f, boundary))
    q0 = np.zeros_like(w0)
    (u, w), q, trace = chambolle_pock((f, w0), q0, K, K_adj, prox_primal,
                                      prox_dual, L, cfg, objective=objective)
    return u, trace
