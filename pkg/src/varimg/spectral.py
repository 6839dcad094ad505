"""Fast diagonal solvers for screened-Laplacian systems via DCT/DFT.

The symmetric-boundary difference operators are diagonalised by the
orthonormal DCT-II: the 1D Laplacian ``-T^T T`` (T the forward difference
with a zeroed last row) has eigenvalues ``2(cos(j*pi/n) - 1)`` for
``j = 0..n-1``.  Periodic boundaries swap the DCT for the unitary DFT with
eigenvalues ``2(cos(2*pi*j/n) - 1)``.

All solves broadcast over leading (batch) axes; transforms are taken on the
trailing image axes.
"""

from __future__ import annotations

import numpy as np
from scipy import fft as spfft

from .grid import PERIODIC, SYMMETRIC, _check_boundary


def eigenvalues_1d(n: int, boundary: str = SYMMETRIC) -> np.ndarray:
    """Eigenvalues of the 1D second-difference matrix, descending from 0."""
    _check_boundary(boundary)
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    j = np.arange(n)
    if boundary == SYMMETRIC:
        theta = j * np.pi / n
    else:
        theta = 2.0 * j * np.pi / n
    return 2.0 * (np.cos(theta) - 1.0)


def _laplacian_plane(shape: tuple[int, int], boundary: str) -> np.ndarray:
    h, w = shape
    ey = eigenvalues_1d(h, boundary)
    ex = eigenvalues_1d(w, boundary)
    return ey[:, None] + ex[None, :]


class SpectralSolver:
    """Cached solver for ``(a*I - b*Lap) u = f`` on a fixed grid.

    ``Lap`` is the 2D second-difference operator ``divergence(gradient(.))``
    whose spectrum lies in ``[-8, 0]``, so the system is positive definite
    whenever ``a > 0`` and ``b >= 0``.
    """

    def __init__(self, shape: tuple[int, int], a: float, b: float,
                 boundary: str = SYMMETRIC):
        _check_boundary(boundary)
        if a <= 0:
            raise ValueError(f"need a > 0 for a positive definite system, got {a}")
        if b < 0:
            raise ValueError(f"need b >= 0, got {b}")
        self.shape = tuple(shape)
        self.a = float(a)
        self.b = float(b)
        self.boundary = boundary
        self._denom = a - b * _laplacian_plane(self.shape, boundary)

    def solve(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=np.float64)
        if f.shape[-2:] != self.shape:
            raise ValueError(f"grid mismatch: solver {self.shape}, input {f.shape}")
        if self.boundary == SYMMETRIC:
            u = spfft.dctn(f, type=2, norm="ortho", axes=(-2, -1))
            u /= self._denom
            return spfft.idctn(u, type=2, norm="ortho", axes=(-2, -1))
        u = np.fft.fft2(f, norm="ortho")
        u /= self._denom
        return np.fft.ifft2(u, norm="ortho").real


_solver_cache: dict[tuple, SpectralSolver] = {}


def solve_screened_laplacian(f: np.ndarray, a: float, b: float,
                             boundary: str = SYMMETRIC) -> np.ndarray:
    """Solve ``(a*I - b*Lap) u = f``, caching the eigenvalue plane per grid."""
    f = np.asarray(f, dtype=np.float64)
    key = (f.shape[-2:], float(a), float(b), boundary, "lap")
    solver = _solver_cache.get(key)
    if solver is None:
        solver = SpectralSolver(f.shape[-2:], a, b, boundary)
        _solver_cache[key] = solver
    return solver.solve(f)


def solve_axis_screened(f: np.ndarray, axis: str, gamma: float, beta: float,
                        boundary: str = SYMMETRIC) -> np.ndarray:
    """Solve the one-axis system ``(gamma*I + beta*T^T T) w = f``.

    ``T^T T`` is the normal operator of the forward difference along the
    chosen axis; its eigenvalues lie in ``[0, 4]``, so the system spectrum
    is ``[gamma, gamma + 4*beta]``.
    """
    _check_boundary(boundary)
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    if gamma <= 0:
        raise ValueError(f"need gamma > 0, got {gamma}")
    if beta < 0:
        raise ValueError(f"need beta >= 0, got {beta}")
    f = np.asarray(f, dtype=np.float64)
    ax = -1 if axis == "x" else -2
    n = f.shape[ax]
    denom = gamma - beta * eigenvalues_1d(n, boundary)
    shape = [1] * f.ndim
    shape[ax] = n
    denom = denom.reshape(shape)
    if boundary == SYMMETRIC:
        u = spfft.dct(f, type=2, norm="ortho", axis=ax)
        u /= denom
        return spfft.idct(u, type=2, norm="ortho", axis=ax)
    u = np.fft.fft(f, norm="ortho", axis=ax)
    u /= denom
    return np.fft.ifft(u, norm="ortho", axis=ax).real


def unitary_dft_2d(u: np.ndarray) -> np.ndarray:
    """Orthonormal 2D DFT on the trailing axes (``F^H F = I``)."""
    return np.fft.fft2(np.asarray(u), norm="ortho")


def inverse_unitary_dft_2d(m: np.ndarray) -> np.ndarray:
    """Inverse of :func:`unitary_dft_2d`; output is complex."""
    return np.fft.ifft2(np.asarray(m), norm="ortho")
