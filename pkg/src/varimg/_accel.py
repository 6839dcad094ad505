"""Shared Nesterov-accelerated (proximal) gradient loop.

One loop serves the smooth accelerated schemes, the accelerated proximal
gradient algorithm and its dual form: the smooth case is the proximal case
with an identity prox.  Momentum follows the variable-parameter recursion

    theta_{k+1}^2 = (1 - theta_{k+1}) theta_k^2 + q theta_{k+1}
    beta_{k+1}    = theta_k (1 - theta_k) / (theta_k^2 + theta_{k+1})

with theta_0 = 1.  At q = 0 this generates exactly the same beta sequence as
the familiar t_{k+1} = (1 + sqrt(1 + 4 t_k^2))/2, beta = (t_k - 1)/t_{k+1}
rule (theta_k = 1/t_k), so a single recursion covers both parameterisations.
"""

from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np

from .grid import inner
from .trace import Trace

RESTART_OBJECTIVE = "objective"
RESTART_GRADIENT = "gradient"
RESTART_PROXIMAL = "proximal"

_RESTART_MODES = (None, RESTART_OBJECTIVE, RESTART_GRADIENT, RESTART_PROXIMAL)


def theta_next(theta: float, q: float) -> float:
    """Positive root of ``x^2 = (1 - x) theta^2 + q x``."""
    b = theta * theta - q
    return 0.5 * (-b + math.sqrt(b * b + 4.0 * theta * theta))


def theta_residual(theta: float, theta_new: float, q: float) -> float:
    """Residual of the defining quadratic at a computed ``theta_new``."""
    return theta_new * theta_new - (1.0 - theta_new) * theta * theta - q * theta_new


def accelerated_loop(
    grad: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    t: float,
    n_iters: int,
    prox: Callable[[np.ndarray, float], np.ndarray] | None = None,
    q: float = 0.0,
    restart: str | None = None,
    value: Callable[[np.ndarray], float] | None = None,
    gap_fn: Callable[[np.ndarray], float] | None = None,
    gap_tol: float | None = None,
    log_every: int = 1,
) -> tuple[np.ndarray, Trace]:
    """Run the accelerated (proximal) gradient iteration.

    Parameters
    ----------
    grad : gradient of the smooth part of the objective being minimised.
    prox : proximal map ``(z, t) -> x`` of the non-smooth part; identity
        when omitted.
    q : momentum parameter in [0, 1]; q = 1 recovers plain gradient descent.
    restart : None, "objective", "gradient" (smooth scheme, needs an extra
        gradient that is reused for the next step) or "proximal" (the
        generalised test using the pre-step point).
    value : objective callable, required for logging and objective restart.
    gap_fn : optional duality-gap callable; logged, and checked against
        ``gap_tol`` for early termination.
    """
    if restart not in _RESTART_MODES:
        raise ValueError(f"unknown restart mode {restart!r}")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    if restart == RESTART_OBJECTIVE and value is None:
        raise ValueError("objective restart needs the objective value callable")

    x_prev = np.array(x0, dtype=np.float64, copy=True)
    x_prev2 = x_prev
    v = x_prev
    theta = 1.0
    trace = Trace()
    t0 = time.perf_counter()

    g = grad(v)
    gap0 = None if gap_fn is None else gap_fn(x_prev)
    if value is not None:
        trace.append(0, value(x_prev), gap=gap0,
                     grad_norm=float(np.linalg.norm(g)),
                     restarted=None if restart is None else False)
    if gap0 is not None and gap_tol is not None and gap0 <= gap_tol:
        return x_prev, trace

    f_prev = value(x_prev) if restart == RESTART_OBJECTIVE else None
    x = x_prev
    for k in range(n_iters):
        z = v - t * g
        x = prox(z, t) if prox is not None else z
        theta_new = theta_next(theta, q)
        beta = theta * (1.0 - theta) / (theta * theta + theta_new)
        v_prev = v
        v = x + beta * (x - x_prev)

        restarted = False
        g_next = None
        if restart == RESTART_GRADIENT:
            g_next = grad(v)
            restarted = inner(g_next, x_prev - x_prev2) > 0.0
        elif restart == RESTART_PROXIMAL:
            restarted = inner(v_prev - x, x_prev - x_prev2) > 0.0
        elif restart == RESTART_OBJECTIVE:
            f_cur = value(x)
            restarted = f_cur > f_prev
            f_prev = f_cur
        if restarted:
            # Reset the momentum state: drop the extrapolation and restart
            # the theta sequence from the current iterate.
            theta_new = 1.0
            v = x
            g_next = None
        theta = theta_new

        x_prev2, x_prev = x_prev, x
        gap = None
        if (k + 1) % log_every == 0 or k + 1 == n_iters:
            gap = None if gap_fn is None else gap_fn(x)
            if value is not None:
                elapsed = (time.perf_counter() - t0) * 1e3
                trace.append(k + 1, value(x), gap=gap,
                             grad_norm=float(np.linalg.norm(g)),
                             restarted=None if restart is None else restarted,
                             elapsed_ms=elapsed)
        if gap is not None and gap_tol is not None and gap <= gap_tol:
            break
        g = g_next if g_next is not None else grad(v)

    return x, trace
