"""Discrete image calculus: finite differences, gradient, divergence, norms.

All operators act on the trailing two axes of an array, so a single image is
a ``(h, w)`` array and anything with leading axes (channels, batches) is
handled by broadcasting.  Vector fields keep their channels on axis ``-3``,
i.e. a 2-channel field over an ``(h, w)`` image has shape ``(2, h, w)``.

The x direction runs along columns (axis ``-1``), y along rows (axis ``-2``).
"""

from __future__ import annotations

import numpy as np

SYMMETRIC = "symmetric"
PERIODIC = "periodic"

_BOUNDARIES = (SYMMETRIC, PERIODIC)


def _check_boundary(boundary: str) -> None:
    if boundary not in _BOUNDARIES:
        raise ValueError(f"unknown boundary {boundary!r}, expected one of {_BOUNDARIES}")


def forward_diff_x(u: np.ndarray, boundary: str = SYMMETRIC) -> np.ndarray:
    """Forward difference along x: ``out[..., j] = u[..., j+1] - u[..., j]``.

    Under the symmetric boundary the sample past the last column replicates
    it, so the last column of the output is zero; the periodic boundary wraps
    around to the first column.
    """
    _check_boundary(boundary)
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)
    out[..., :-1] = u[..., 1:] - u[..., :-1]
    if boundary == SYMMETRIC:
        out[..., -1] = 0.0
    else:
        out[..., -1] = u[..., 0] - u[..., -1]
    return out


def forward_diff_y(u: np.ndarray, boundary: str = SYMMETRIC) -> np.ndarray:
    """Forward difference along y (rows)."""
    _check_boundary(boundary)
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)
    out[..., :-1, :] = u[..., 1:, :] - u[..., :-1, :]
    if boundary == SYMMETRIC:
        out[..., -1, :] = 0.0
    else:
        out[..., -1, :] = u[..., 0, :] - u[..., -1, :]
    return out


def backward_diff_x(u: np.ndarray, boundary: str = SYMMETRIC) -> np.ndarray:
    """Backward difference along x: ``out[..., j] = u[..., j] - u[..., j-1]``.

    The symmetric boundary replicates the first column, zeroing the first
    output column.
    """
    _check_boundary(boundary)
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)
    out[..., 1:] = u[..., 1:] - u[..., :-1]
    if boundary == SYMMETRIC:
        out[..., 0] = 0.0
    else:
        out[..., 0] = u[..., 0] - u[..., -1]
    return out


def backward_diff_y(u: np.ndarray, boundary: str = SYMMETRIC) -> np.ndarray:
    """Backward difference along y (rows)."""
    _check_boundary(boundary)
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)
    out[..., 1:, :] = u[..., 1:, :] - u[..., :-1, :]
    if boundary == SYMMETRIC:
        out[..., 0, :] = 0.0
    else:
        out[..., 0, :] = u[..., 0, :] - u[..., -1, :]
    return out


def _neg_adjoint_diff_x(p: np.ndarray, boundary: str) -> np.ndarray:
    # Application of -Lx^T, the exact adjoint of forward_diff_x.  For the
    # symmetric boundary this differs from backward_diff_x in the first and
    # last columns (the zeroed stencil row changes the transpose).
    out = np.empty_like(p)
    if boundary == SYMMETRIC:
        out[..., 0] = p[..., 0]
        out[..., 1:-1] = p[..., 1:-1] - p[..., :-2]
        out[..., -1] = -p[..., -2]
    else:
        out[..., :] = p - np.roll(p, 1, axis=-1)
    return out


def _neg_adjoint_diff_y(p: np.ndarray, boundary: str) -> np.ndarray:
    out = np.empty_like(p)
    if boundary == SYMMETRIC:
        out[..., 0, :] = p[..., 0, :]
        out[..., 1:-1, :] = p[..., 1:-1, :] - p[..., :-2, :]
        out[..., -1, :] = -p[..., -2, :]
    else:
        out[...] = p - np.roll(p, 1, axis=-2)
    return out


def gradient(u: np.ndarray, boundary: str = SYMMETRIC) -> np.ndarray:
    """Discrete gradient: stacks the x and y forward differences on axis -3."""
    return np.stack(
        [forward_diff_x(u, boundary), forward_diff_y(u, boundary)], axis=-3
    )


def divergence(p: np.ndarray, boundary: str = SYMMETRIC) -> np.ndarray:
    """Divergence of a 2-channel field: ``-Lx^T p1 - Ly^T p2``.

    Exact adjoint of :func:`gradient` up to sign, i.e.
    ``<grad(u), p> == -<u, divergence(p)>``.
    """
    _check_boundary(boundary)
    p = np.asarray(p, dtype=np.float64)
    if p.ndim < 3 or p.shape[-3] != 2:
        raise ValueError(f"divergence expects a 2-channel field, got shape {p.shape}")
    return _neg_adjoint_diff_x(p[..., 0, :, :], boundary) + _neg_adjoint_diff_y(
        p[..., 1, :, :], boundary
    )


def pixel_norm(p: np.ndarray) -> np.ndarray:
    """Per-pixel Euclidean norm across the channel axis (-3)."""
    p = np.asarray(p, dtype=np.float64)
    if p.ndim < 3:
        raise ValueError(f"expected a channelled field, got shape {p.shape}")
    return np.sqrt(np.sum(p * p, axis=-3))


def norm_sq(x: np.ndarray) -> float:
    """Squared Euclidean norm of an image or field (sum over all entries)."""
    x = np.asarray(x, dtype=np.float64)
    return float(np.sum(x * x))


def inner(a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean inner product over all entries."""
    return float(np.sum(np.asarray(a) * np.asarray(b)))
