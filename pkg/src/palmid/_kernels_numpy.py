"""Pure-numpy implementations of the hot pixel kernels.

Each function here has a numba twin in ``_kernels_numba``; ``palmid.kernels``
picks one set at import time. Inputs arrive pre-validated and pre-padded by
the dispatch layer, so these stay free of checks.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def correlate2d(padded: np.ndarray, kernel: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    windows = sliding_window_view(padded, kernel.shape)
    return np.tensordot(windows, kernel, axes=([2, 3], [0, 1]))


def neighbor_counts(padded: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    # padded is uint8 with a 1-pixel zero border; count the 8 neighbors only.
    counts = np.zeros((out_h, out_w), dtype=np.int64)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            counts += padded[1 + dy:1 + dy + out_h, 1 + dx:1 + dx + out_w]
    return counts


def binary_dilate(padded: np.ndarray, radius: int, out_h: int, out_w: int) -> np.ndarray:
    side = 2 * radius + 1
    windows = sliding_window_view(padded, (side, side))
    return windows.any(axis=(2, 3))


def block_mean_square(image: np.ndarray, block_h: int, block_w: int) -> np.ndarray:
    h, w = image.shape
    sq = image * image
    return sq.reshape(h // block_h, block_h, w // block_w, block_w).mean(axis=(1, 3))


def haar2d(image: np.ndarray):
    even = image[:, 0::2]
    odd = image[:, 1::2]
    lo = (even + odd) * _INV_SQRT2
    hi = (even - odd) * _INV_SQRT2

    ll = (lo[0::2, :] + lo[1::2, :]) * _INV_SQRT2
    hl = (lo[0::2, :] - lo[1::2, :]) * _INV_SQRT2
    lh = (hi[0::2, :] + hi[1::2, :]) * _INV_SQRT2
    hh = (hi[0::2, :] - hi[1::2, :]) * _INV_SQRT2
    return ll, lh, hl, hh
