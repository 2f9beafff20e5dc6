"""Orthonormal 2-D Haar wavelet and DCT-II, plus zigzag frequency ordering.

Haar convention for a 2x2 block ``[[a, b], [c, d]]``::

    ll = (a + b + c + d) / 2
    hl = (a - b + c - d) / 2    # horizontal frequency: differences across columns
    lh = (a + b - c - d) / 2
    hh = (a - b - c + d) / 2
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .image_core import DimensionError, as_image, check_divisible


@dataclass(frozen=True)
class SubbandSet:
    ll: np.ndarray
    hl: np.ndarray
    lh: np.ndarray
    hh: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.ll.shape


@dataclass(frozen=True)
class DwtPyramid:
    """Two-level Haar decomposition.

    ``level2`` is the decomposition of the level-1 approximation, which is
    therefore not stored separately.
    """
    level2: SubbandSet
    hl1: np.ndarray
    lh1: np.ndarray
    hh1: np.ndarray
    original_width: int
    original_height: int

    @property
    def hl2(self) -> np.ndarray:
        return self.level2.hl

    def replace_hl2(self, hl2: np.ndarray) -> "DwtPyramid":
        lv = self.level2
        if hl2.shape != lv.hl.shape:
            raise DimensionError(f"HL2 must be {lv.hl.shape}, got {hl2.shape}")
        return DwtPyramid(SubbandSet(lv.ll, hl2, lv.lh, lv.hh), self.hl1, self.lh1,
                          self.hh1, self.original_width, self.original_height)


def haar_forward_level(grid) -> SubbandSet:
    x = as_image(grid)
    check_divisible(x, 2)
    a = x[0::2, 0::2]
    b = x[0::2, 1::2]
    c = x[1::2, 0::2]
    d = x[1::2, 1::2]
    return SubbandSet(
        ll=(a + b + c + d) / 2,
        hl=(a - b + c - d) / 2,
        lh=(a + b - c - d) / 2,
        hh=(a - b - c + d) / 2,
    )


def haar_inverse_level(subbands: SubbandSet) -> np.ndarray:
    ll, hl, lh, hh = (np.asarray(s, dtype=np.float64)
                      for s in (subbands.ll, subbands.hl, subbands.lh, subbands.hh))
    if not (ll.shape == hl.shape == lh.shape == hh.shape) or ll.ndim != 2:
        raise DimensionError(
            f"subband shapes differ: {ll.shape}, {hl.shape}, {lh.shape}, {hh.shape}")
    h, w = ll.shape
    out = np.empty((2 * h, 2 * w))
    out[0::2, 0::2] = (ll + hl + lh + hh) / 2
    out[0::2, 1::2] = (ll - hl + lh - hh) / 2
    out[1::2, 0::2] = (ll + hl - lh - hh) / 2
    out[1::2, 1::2] = (ll - hl - lh + hh) / 2
    return out


def haar_pyramid(image) -> DwtPyramid:
    """Level 1 on the image, level 2 on the level-1 approximation."""
    x = as_image(image)
    check_divisible(x, 4)
    first = haar_forward_level(x)
    second = haar_forward_level(first.ll)
    return DwtPyramid(second, first.hl, first.lh, first.hh,
                      original_width=x.shape[1], original_height=x.shape[0])


def haar_inverse(pyramid: DwtPyramid) -> np.ndarray:
    h, w = pyramid.original_height, pyramid.original_width
    l1 = (h // 2, w // 2)
    l2 = (h // 4, w // 4)
    if h % 4 or w % 4:
        raise DimensionError(f"pyramid declares {w}x{h}, not divisible by 4")
    if pyramid.level2.shape != l2 or any(
            band.shape != l1 for band in (pyramid.hl1, pyramid.lh1, pyramid.hh1)):
        raise DimensionError("pyramid subband sizes are inconsistent")
    ll1 = haar_inverse_level(pyramid.level2)
    return haar_inverse_level(SubbandSet(ll1, pyramid.hl1, pyramid.lh1, pyramid.hh1))


@lru_cache(maxsize=16)
def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix ``C`` so that ``C @ x`` transforms a column."""
    k = np.arange(n)[:, None]
    i = np.arange(n)[None, :]
    c = np.sqrt(2.0 / n) * np.cos(np.pi * (2 * i + 1) * k / (2 * n))
    c[0, :] = np.sqrt(1.0 / n)
    c.setflags(write=False)
    return c


def dct2_forward(image) -> np.ndarray:
    """Separable orthonormal 2-D DCT-II (rows, then columns)."""
    x = as_image(image)
    h, w = x.shape
    return dct_matrix(h) @ (x @ dct_matrix(w).T)


def dct2_inverse(spectrum) -> np.ndarray:
    s = as_image(spectrum)
    h, w = s.shape
    return dct_matrix(h).T @ s @ dct_matrix(w)


@lru_cache(maxsize=16)
def _zigzag(n: int) -> tuple[tuple[int, int], ...]:
    cells = [(r, c) for r in range(n) for c in range(n)]
    # odd anti-diagonals run down-left (row ascending), even ones up-right
    cells.sort(key=lambda rc: (rc[0] + rc[1], rc[0] if (rc[0] + rc[1]) % 2 else -rc[0]))
    return tuple(cells)


def zigzag_indices(n: int) -> list[tuple[int, int]]:
    """JPEG-style zigzag traversal of an ``n x n`` grid starting at (0, 0)."""
    if n < 1:
        raise ValueError(f"grid side must be >= 1, got {n}")
    return list(_zigzag(n))


def zigzag_array(n: int) -> np.ndarray:
    """Zigzag order as an ``(n*n, 2)`` integer array of (row, col)."""
    return np.array(_zigzag(n), dtype=np.intp).reshape(-1, 2)
