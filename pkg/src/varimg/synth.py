"""Deterministic test-data synthesis: noise, ramps, phantoms, sampling masks.

All randomness flows through ``numpy.random.default_rng`` (the PCG64
generator), so a fixed seed reproduces fixtures bit-for-bit and the
generator is documented for cross-language reimplementation.
"""

from __future__ import annotations

import numpy as np

COLUMNS = "columns"
LOWFREQ = "lowfreq"
BERNOULLI = "bernoulli"


def add_gaussian_noise(img: np.ndarray, variance: float, seed: int,
                       clamp: bool = True) -> np.ndarray:
    """Add zero-mean Gaussian noise, then clamp to [0, 1].

    ``variance`` is the pre-clamp noise variance; ``variance = 0`` returns
    a copy of the input unchanged.
    """
    if variance < 0:
        raise ValueError(f"need variance >= 0, got {variance}")
    img = np.asarray(img, dtype=np.float64)
    if variance == 0:
        return img.copy()
    rng = np.random.default_rng(seed)
    out = img + rng.normal(0.0, np.sqrt(variance), img.shape)
    return np.clip(out, 0.0, 1.0) if clamp else out


def intensity_ramp_mask(img: np.ndarray, floor: float = 0.2) -> np.ndarray:
    """Multiply by a vertical ramp: ``floor`` at the top row, 1 at the bottom."""
    img = np.asarray(img, dtype=np.float64)
    h = img.shape[-2]
    ramp = floor + (1.0 - floor) * np.arange(h) / max(h - 1, 1)
    return img * ramp[:, None]


def shapes_phantom(h: int = 64, w: int = 64) -> np.ndarray:
    """Geometric test image: sharp-edged shapes over a smooth background.

    A rectangle and a disc sit on a gentle diagonal gradient, giving both
    discontinuities and linear segments in every cross-section through the
    shapes.
    """
    yy, xx = np.mgrid[0:h, 0:w]
    img = 0.15 + 0.25 * (xx / max(w - 1, 1) + yy / max(h - 1, 1)) / 2.0
    img[h // 6: h // 2, w // 8: w // 2] = 0.85
    r = min(h, w) // 5
    disc = (yy - 2 * h // 3) ** 2 + (xx - 2 * w // 3) ** 2 <= r * r
    img[disc] = 0.6
    return np.clip(img, 0.0, 1.0)


def ramp_edge_phantom(h: int = 64, w: int = 64, edge_col: int | None = None,
                      low: float = 0.2, high: float = 0.6,
                      step: float = 0.95) -> np.ndarray:
    """Row-constant profile: a linear ramp followed by a sharp step.

    Columns left of ``edge_col`` ramp linearly from ``low`` to ``high``;
    columns from ``edge_col`` on are the constant ``step``.  Used for
    staircase-artifact comparisons.
    """
    edge_col = 2 * w // 3 if edge_col is None else edge_col
    if not 1 < edge_col < w:
        raise ValueError(f"edge_col {edge_col} out of range for width {w}")
    row = np.full(w, step)
    row[:edge_col] = np.linspace(low, high, edge_col)
    return np.tile(row, (h, 1))


def mri_phantom(h: int = 64, w: int = 64) -> np.ndarray:
    """Piecewise-smooth phantom: nested ellipses on a dark background.

    The outer ellipse carries a smooth internal gradient; inner structures
    add sharp edges, mimicking an anatomical slice.
    """
    yy, xx = np.mgrid[0:h, 0:w]
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    ny = (yy - cy) / (0.45 * h)
    nx = (xx - cx) / (0.4 * w)
    img = np.zeros((h, w))
    outer = ny * ny + nx * nx <= 1.0
    img[outer] = 0.7 + 0.2 * (yy[outer] - cy) / h
    inner = (ny / 0.7) ** 2 + (nx / 0.7) ** 2 <= 1.0
    img[inner] = 0.35 + 0.3 * (xx[inner] - cx) / w
    blob = ((yy - 0.35 * h) / (0.1 * h)) ** 2 + ((xx - 0.45 * w) / (0.08 * w)) ** 2 <= 1.0
    img[blob] = 0.9
    blob2 = ((yy - 0.6 * h) / (0.08 * h)) ** 2 + ((xx - 0.6 * w) / (0.1 * w)) ** 2 <= 1.0
    img[blob2] = 0.1
    return np.clip(img, 0.0, 1.0)


def smooth_texture(h: int = 64, w: int = 64, seed: int = 0,
                   cutoff: float = 0.15) -> np.ndarray:
    """Band-limited random texture in [0, 1] (smooth enough for flow tests).

    Low-pass filters white noise in the DFT domain; ``cutoff`` is the kept
    fraction of the frequency axis.
    """
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((h, w))
    fy = np.fft.fftfreq(h)[:, None]
    fx = np.fft.fftfreq(w)[None, :]
    keep = np.sqrt(fy * fy + fx * fx) <= cutoff
    smooth = np.fft.ifft2(np.fft.fft2(noise) * keep).real
    lo, hi = smooth.min(), smooth.max()
    return (smooth - lo) / (hi - lo) if hi > lo else np.full((h, w), 0.5)


def sampling_mask(shape: tuple[int, int], rate: float, pattern: str = LOWFREQ,
                  seed: int = 0) -> np.ndarray:
    """Binary k-space sampling mask at (approximately) the requested rate.

    Patterns: ``columns`` samples whole random columns; ``lowfreq`` keeps a
    centred low-frequency column band (half the budget) plus random columns;
    ``bernoulli`` samples pixels independently.  Frequencies are in the
    unshifted DFT layout (DC at index 0).
    """
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"need rate in (0, 1], got {rate}")
    h, w = shape
    rng = np.random.default_rng(seed)
    mask = np.zeros((h, w))
    if pattern == BERNOULLI:
        n = max(1, round(rate * h * w))
        flat = rng.choice(h * w, size=n, replace=False)
        mask.ravel()[flat] = 1.0
    elif pattern in (COLUMNS, LOWFREQ):
        n_cols = max(1, round(rate * w))
        cols: set[int] = set()
        if pattern == LOWFREQ:
            band = max(1, n_cols // 2)
            # Lowest |frequency| columns in unshifted layout.
            order = np.argsort(np.minimum(np.arange(w), w - np.arange(w)),
                               kind="stable")
            cols.update(int(c) for c in order[:band])
        remaining = [c for c in range(w) if c not in cols]
        extra = n_cols - len(cols)
        if extra > 0:
            cols.update(int(c) for c in rng.choice(remaining, size=extra,
                                                   replace=False))
        mask[:, sorted(cols)] = 1.0
    else:
        raise ValueError(f"unknown mask pattern {pattern!r}")
    return mask
