"""Image quality metrics on [0, 1]-normalised intensities."""

from __future__ import annotations

import numpy as np
from scipy import signal


def _check_pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def psnr(a: np.ndarray, b: np.ndarray, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; ``inf`` for identical images."""
    a, b = _check_pair(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return np.inf
    return 10.0 * np.log10(peak * peak / mse)


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    x = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-0.5 * (x / sigma) ** 2)
    w = np.outer(g, g)
    return w / w.sum()


def ssim(a: np.ndarray, b: np.ndarray, window_size: int = 11,
         sigma: float = 1.5, k1: float = 0.01, k2: float = 0.03,
         data_range: float = 1.0) -> float:
    """Structural similarity with a Gaussian window, averaged over valid
    window positions.

    The window shrinks (to the nearest odd size) on images smaller than the
    default 11x11 so that at least one valid position exists.
    """
    a, b = _check_pair(a, b)
    if a.ndim != 2:
        raise ValueError(f"expected a 2D image, got shape {a.shape}")
    size = min(window_size, a.shape[0], a.shape[1])
    if size % 2 == 0:
        size -= 1
    if size < 1:
        raise ValueError("image too small for any SSIM window")
    w = _gaussian_window(size, sigma)

    def filt(x):
        return signal.convolve2d(x, w, mode="valid")

    mu_a = filt(a)
    mu_b = filt(b)
    var_a = filt(a * a) - mu_a * mu_a
    var_b = filt(b * b) - mu_b * mu_b
    cov = filt(a * b) - mu_a * mu_b
    c1 = (k1 * data_range) ** 2
    c2 = (k2 * data_range) ** 2
    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))
