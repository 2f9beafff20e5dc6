"""Grayscale image plumbing: binary PGM I/O and PSNR.

Images are plain 2-D ``float64`` arrays of shape ``(height, width)``.
Values are kept real-valued through the whole pipeline; quantization to
8 bits only happens in :func:`save_pgm`.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from importlib import resources

import numpy as np

PEAK = 255.0


class ImageFormatError(ValueError):
    """Raised for malformed or unsupported PGM files."""


class DimensionError(ValueError):
    """Raised when image dimensions violate a size precondition."""


def as_image(pixels) -> np.ndarray:
    """Return ``pixels`` as a 2-D float64 array (copying only if needed)."""
    arr = np.asarray(pixels, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"expected a non-empty 2-D grid, got shape {arr.shape}")
    return arr


def check_divisible(image: np.ndarray, multiple: int) -> None:
    h, w = image.shape
    if h % multiple or w % multiple:
        raise DimensionError(
            f"image is {w}x{h}; both dimensions must be divisible by {multiple}")


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    # PGM header: whitespace separated tokens, '#' comments run to end of line.
    tokens: list[bytes] = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ImageFormatError("truncated PGM header")
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    if pos >= n or not data[pos:pos + 1].isspace():
        raise ImageFormatError("missing whitespace after PGM header")
    return tokens, pos + 1


def load_pgm(path, multiple: int = 4) -> np.ndarray:
    """Read an 8-bit binary (P5) PGM file into a float64 array.

    Parameters
    ----------
    path : str or path-like
        File to read.
    multiple : int
        Both dimensions must be divisible by this (4 allows two Haar levels).
        Pass 1 to skip the check.

    Raises
    ------
    ImageFormatError
        Bad magic number, malformed header, max value other than 255, or
        a raster of the wrong length.
    DimensionError
        Dimensions not divisible by ``multiple``.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] != b"P5":
        raise ImageFormatError("not a binary PGM (expected magic 'P5')")
    tokens, offset = _header_tokens(data, 4)
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise ImageFormatError(f"non-numeric PGM header field: {exc}") from None
    if width <= 0 or height <= 0:
        raise ImageFormatError(f"invalid PGM size {width}x{height}")
    if maxval != 255:
        raise ImageFormatError(f"unsupported PGM max value {maxval} (only 255)")
    raster = data[offset:offset + width * height]
    if len(raster) != width * height:
        raise ImageFormatError(
            f"PGM raster has {len(raster)} bytes, expected {width * height}")
    image = np.frombuffer(raster, dtype=np.uint8).reshape(height, width).astype(np.float64)
    if multiple > 1:
        check_divisible(image, multiple)
    return image


def quantize(image) -> np.ndarray:
    """Round half away from zero and clamp to ``[0, 255]`` as uint8."""
    arr = as_image(image)
    rounded = np.sign(arr) * np.floor(np.abs(arr) + 0.5)
    return np.clip(rounded, 0, 255).astype(np.uint8)


def save_pgm(image, path) -> None:
    """Write ``image`` as an 8-bit binary PGM (rounded and clamped)."""
    raster = quantize(image)
    h, w = raster.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(raster.tobytes())


def cameraman() -> np.ndarray:
    """The bundled 256x256 cameraman test image.

    Derived from scikit-image's CC0 ``camera`` image (512x512) by 2x2 block
    averaging and rounding.
    """
    ref = resources.files("cswatermark") / "data" / "cameraman256.pgm"
    with resources.as_file(ref) as path:
        return load_pgm(os.fspath(path))


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr_db: float

    def to_dict(self) -> dict:
        return {"mse": self.mse, "psnr_db": format_db(self.psnr_db)}


def format_db(value: float):
    """JSON-friendly dB value: infinities become the string ``"inf"``."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def psnr(reference, test) -> QualityReport:
    """Peak signal-to-noise ratio with a fixed peak of 255.

    Identical inputs give ``psnr_db == math.inf``.
    """
    ref = as_image(reference)
    tst = as_image(test)
    if ref.shape != tst.shape:
        raise DimensionError(f"shape mismatch: {ref.shape} vs {tst.shape}")
    mse = float(np.mean((ref - tst) ** 2))
    if mse == 0.0:
        return QualityReport(0.0, math.inf)
    return QualityReport(mse, 10.0 * math.log10(PEAK ** 2 / mse))
