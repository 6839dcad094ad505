"""Smooth first-order solvers and the Tikhonov denoising problem."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import grid, spectral
from ._accel import RESTART_GRADIENT, RESTART_OBJECTIVE, accelerated_loop
from .grid import SYMMETRIC
from .trace import Trace


@dataclass
class SmoothProblem:
    """A differentiable convex objective with known curvature constants.

    ``mu == 0`` means the strong convexity parameter is unknown.
    """

    value: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    lipschitz: float
    mu: float = 0.0

    @property
    def condition_number(self) -> float:
        if self.mu <= 0:
            return np.inf
        return self.lipschitz / self.mu


def tikhonov_problem(f: np.ndarray, lam: float,
                     boundary: str = SYMMETRIC) -> SmoothProblem:
    """Quadratic denoising objective ``1/2 ||u-f||^2 + lam/2 ||grad u||^2``.

    The Hessian ``I - lam * Lap`` has spectrum ``[1, 8*lam + 1]``, giving
    ``mu = 1`` and ``lipschitz = 8*lam + 1``.
    """
    if lam <= 0:
        raise ValueError(f"need lam > 0, got {lam}")
    f = np.asarray(f, dtype=np.float64)

    def value(u):
        return 0.5 * grid.norm_sq(u - f) + 0.5 * lam * grid.norm_sq(
            grid.gradient(u, boundary))

    def gradient(u):
        return (u - f) - lam * grid.divergence(grid.gradient(u, boundary), boundary)

    return SmoothProblem(value=value, grad=gradient, lipschitz=8.0 * lam + 1.0, mu=1.0)


def tikhonov_analytic(f: np.ndarray, lam: float,
                      boundary: str = SYMMETRIC) -> np.ndarray:
    """Closed-form minimiser ``(I - lam*Lap)^{-1} f`` via the DCT solver."""
    if lam < 0:
        raise ValueError(f"need lam >= 0, got {lam}")
    return spectral.solve_screened_laplacian(f, 1.0, lam, boundary)


def gradient_descent(problem: SmoothProblem, u0: np.ndarray, t: float,
                     n_iters: int, log_every: int = 1) -> tuple[np.ndarray, Trace]:
    """Fixed-step gradient descent ``u <- u - t * grad(u)``."""
    if t > 1.0 / problem.lipschitz * (1 + 1e-12):
        raise ValueError(
            f"step {t} exceeds 1/lipschitz = {1.0 / problem.lipschitz}; "
            "divergence risk")
    u = np.array(u0, dtype=np.float64, copy=True)
    trace = Trace()
    t0 = time.perf_counter()
    g = problem.grad(u)
    trace.append(0, problem.value(u), grad_norm=float(np.linalg.norm(g)))
    for k in range(n_iters):
        u = u - t * g
        g = problem.grad(u)
        if (k + 1) % log_every == 0 or k + 1 == n_iters:
            trace.append(k + 1, problem.value(u),
                         grad_norm=float(np.linalg.norm(g)),
                         elapsed_ms=(time.perf_counter() - t0) * 1e3)
    return u, trace


def nesterov_scheme1(problem: SmoothProblem, u0: np.ndarray, t: float,
                     q: float, n_iters: int,
                     log_every: int = 1) -> tuple[np.ndarray, Trace]:
    """Accelerated gradient descent with the variable momentum recursion.

    ``q = 1`` reduces to gradient descent; ``q = 1/kappa`` is the optimal
    choice when the condition number is known.
    """
    return accelerated_loop(problem.grad, u0, t, n_iters, q=q,
                            value=problem.value, log_every=log_every)


def nesterov_scheme2(problem: SmoothProblem, u0: np.ndarray, t: float,
                     n_iters: int, log_every: int = 1) -> tuple[np.ndarray, Trace]:
    """Constant-momentum acceleration with the optimal beta for known mu."""
    if problem.mu <= 0:
        raise ValueError("scheme 2 needs a known strong convexity parameter")
    root = np.sqrt(problem.mu / problem.lipschitz)
    beta = (1.0 - root) / (1.0 + root)
    u_prev = np.array(u0, dtype=np.float64, copy=True)
    v = u_prev
    trace = Trace()
    t0 = time.perf_counter()
    g = problem.grad(v)
    trace.append(0, problem.value(u_prev), grad_norm=float(np.linalg.norm(g)))
    u = u_prev
    for k in range(n_iters):
        u = v - t * g
        v = u + beta * (u - u_prev)
        u_prev = u
        g = problem.grad(v)
        if (k + 1) % log_every == 0 or k + 1 == n_iters:
            trace.append(k + 1, problem.value(u),
                         grad_norm=float(np.linalg.norm(g)),
                         elapsed_ms=(time.perf_counter() - t0) * 1e3)
    return u, trace


def nesterov_restart(problem: SmoothProblem, u0: np.ndarray, t: float,
                     n_iters: int, mode: str = RESTART_GRADIENT,
                     log_every: int = 1) -> tuple[np.ndarray, Trace]:
    """Acceleration (q = 0) with adaptive restart.

    ``mode`` selects the objective-increase or gradient/velocity-angle test;
    a firing test resets the momentum state to its initial value.
    """
    if mode not in (RESTART_GRADIENT, RESTART_OBJECTIVE):
        raise ValueError(f"unknown restart mode {mode!r}")
    return accelerated_loop(problem.grad, u0, t, n_iters, q=0.0, restart=mode,
                            value=problem.value, log_every=log_every)
