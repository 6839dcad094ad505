"""Image file formats: PGM (ascii/binary), lossless float64 grids, PPM.

The float64 container ("imgf64") stores magic ``IMF8``, then little-endian
u32 width, height and channel count, then the samples as little-endian
float64, row-major with channels interleaved per pixel.  Single-channel
files map to arrays of shape (h, w); multi-channel files to (c, h, w).
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"IMF8"
# Guard against absurd headers before allocating.
MAX_PIXELS = 1 << 26


class ImageIOError(ValueError):
    """Base class for image file errors."""


class MalformedHeaderError(ImageIOError):
    """Header bytes do not describe a valid file of the claimed format."""


class DimensionOverflowError(ImageIOError):
    """Header dimensions exceed the supported size."""


class TruncatedPayloadError(ImageIOError):
    """File ends before the payload promised by the header."""


def _check_dims(w: int, h: int, c: int) -> None:
    if w <= 0 or h <= 0 or c <= 0:
        raise MalformedHeaderError(f"non-positive dimensions {w}x{h}x{c}")
    if w * h * c > MAX_PIXELS:
        raise DimensionOverflowError(
            f"{w}x{h}x{c} exceeds the {MAX_PIXELS}-sample limit")


def save_imgf64(img: np.ndarray, path) -> None:
    """Write a float64 grid losslessly; accepts (h, w) or (c, h, w)."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 2:
        img = img[None]
    if img.ndim != 3:
        raise ValueError(f"expected (h, w) or (c, h, w), got shape {img.shape}")
    c, h, w = img.shape
    _check_dims(w, h, c)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<III", w, h, c))
        fh.write(np.ascontiguousarray(
            np.moveaxis(img, 0, -1)).astype("<f8").tobytes())


def load_imgf64(path) -> np.ndarray:
    with open(path, "rb") as fh:
        head = fh.read(16)
        if len(head) < 16 or head[:4] != MAGIC:
            raise MalformedHeaderError("missing IMF8 magic or short header")
        w, h, c = struct.unpack("<III", head[4:])
        _check_dims(w, h, c)
        payload = fh.read(8 * w * h * c)
        if len(payload) < 8 * w * h * c:
            raise TruncatedPayloadError(
                f"expected {8 * w * h * c} payload bytes, got {len(payload)}")
    img = np.frombuffer(payload, dtype="<f8").reshape(h, w, c)
    img = np.moveaxis(img, -1, 0).astype(np.float64)
    return img[0] if c == 1 else img


def _read_pgm_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    """Read whitespace-separated integer tokens, skipping # comments.

    Returns the tokens and the offset one whitespace byte past the last one.
    """
    tokens: list[int] = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i: i + 1].isspace():
            i += 1
        if i < n and data[i] == ord("#"):
            while i < n and data[i] not in (10, 13):
                i += 1
            continue
        j = i
        while j < n and not data[j: j + 1].isspace():
            j += 1
        if j == i:
            raise MalformedHeaderError("unexpected end of PGM header")
        try:
            tokens.append(int(data[i:j]))
        except ValueError as exc:
            raise MalformedHeaderError(
                f"non-numeric PGM header token {data[i:j]!r}") from exc
        i = j
    return tokens, i + 1


def load_pgm(path) -> np.ndarray:
    """Load a P2/P5 PGM image, normalised to [0, 1] by its maxval."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise MalformedHeaderError(f"not a PGM file (magic {magic!r})")
    (w, h, maxval), offset = _read_pgm_tokens(data[2:], 3)
    offset += 2
    if not 0 < maxval < 65536:
        raise MalformedHeaderError(f"PGM maxval {maxval} out of range [1, 65535]")
    _check_dims(w, h, 1)
    if magic == b"P2":
        try:
            vals = np.array(data[offset:].split()[: w * h], dtype=np.int64)
        except ValueError as exc:
            raise TruncatedPayloadError("non-numeric PGM sample data") from exc
        if vals.size < w * h:
            raise TruncatedPayloadError(
                f"expected {w * h} samples, got {vals.size}")
    else:
        width = 1 if maxval < 256 else 2
        need = w * h * width
        raw = data[offset: offset + need]
        if len(raw) < need:
            raise TruncatedPayloadError(
                f"expected {need} payload bytes, got {len(raw)}")
        dtype = np.uint8 if width == 1 else ">u2"
        vals = np.frombuffer(raw, dtype=dtype).astype(np.int64)
    if np.any(vals > maxval) or np.any(vals < 0):
        raise MalformedHeaderError("PGM sample exceeds declared maxval")
    return (vals.reshape(h, w) / maxval).astype(np.float64)


def save_pgm(img: np.ndarray, path, binary: bool = True,
             maxval: int = 255) -> None:
    """Write a [0, 1] image as P5 (binary) or P2 (ascii) PGM."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"PGM stores single-channel images, got {img.shape}")
    if not 0 < maxval < 65536:
        raise ValueError(f"maxval {maxval} out of range [1, 65535]")
    h, w = img.shape
    q = np.clip(np.rint(img * maxval), 0, maxval).astype(np.int64)
    header = f"P{'5' if binary else '2'}\n{w} {h}\n{maxval}\n".encode()
    with open(path, "wb") as fh:
        fh.write(header)
        if binary:
            fh.write(q.astype(np.uint8 if maxval < 256 else ">u2").tobytes())
        else:
            fh.write("\n".join(" ".join(str(v) for v in row)
                               for row in q).encode() + b"\n")


def save_ppm(rgb: np.ndarray, path) -> None:
    """Write an (h, w, 3) uint8 image as binary PPM (P6, maxval 255)."""
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[-1] != 3:
        raise ValueError(f"expected (h, w, 3), got {rgb.shape}")
    h, w, _ = rgb.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode())
        fh.write(np.clip(rgb, 0, 255).astype(np.uint8).tobytes())


def load_image(path, fmt: str | None = None) -> np.ndarray:
    """Load an image, inferring the format from magic bytes when not given.

    ``fmt`` may be "pgm-ascii", "pgm-binary", or "imgf64".
    """
    if fmt is None:
        with open(path, "rb") as fh:
            magic = fh.read(4)
        if magic == MAGIC:
            fmt = "imgf64"
        elif magic[:2] in (b"P2", b"P5"):
            fmt = "pgm-binary"
        else:
            raise MalformedHeaderError(f"unrecognised magic bytes {magic!r}")
    if fmt == "imgf64":
        return load_imgf64(path)
    if fmt in ("pgm-ascii", "pgm-binary"):
        return load_pgm(path)
    raise ValueError(f"unknown format {fmt!r}")


def save_image(img: np.ndarray, path, fmt: str | None = None) -> None:
    """Save an image; format inferred from the file extension when not given."""
    if fmt is None:
        name = str(path).lower()
        fmt = "pgm-binary" if name.endswith(".pgm") else "imgf64"
    if fmt == "imgf64":
        save_imgf64(img, path)
    elif fmt == "pgm-binary":
        save_pgm(img, path, binary=True)
    elif fmt == "pgm-ascii":
        save_pgm(img, path, binary=False)
    else:
        raise ValueError(f"unknown format {fmt!r}")
