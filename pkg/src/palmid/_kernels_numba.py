"""Numba-compiled implementations of the hot pixel kernels.

Loop bodies mirror ``_kernels_numpy`` exactly; the haar step keeps the
two-stage row/column form so both backends round the same way.
"""

import numpy as np
from numba import njit

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


@njit(cache=True)
def correlate2d(padded, kernel, out_h, out_w):
    kh, kw = kernel.shape
    out = np.empty((out_h, out_w), dtype=np.float64)
    for y in range(out_h):
        for x in range(out_w):
            acc = 0.0
            for s in range(kh):
                for t in range(kw):
                    acc += kernel[s, t] * padded[y + s, x + t]
            out[y, x] = acc
    return out


@njit(cache=True)
def neighbor_counts(padded, out_h, out_w):
    counts = np.zeros((out_h, out_w), dtype=np.int64)
    for y in range(out_h):
        for x in range(out_w):
            c = 0
            for dy in range(3):
                for dx in range(3):
                    if dy == 1 and dx == 1:
                        continue
                    c += padded[y + dy, x + dx]
            counts[y, x] = c
    return counts


@njit(cache=True)
def binary_dilate(padded, radius, out_h, out_w):
    side = 2 * radius + 1
    out = np.zeros((out_h, out_w), dtype=np.bool_)
    for y in range(out_h):
        for x in range(out_w):
            hit = False
            for dy in range(side):
                if hit:
                    break
                for dx in range(side):
                    if padded[y + dy, x + dx]:
                        hit = True
                        break
            out[y, x] = hit
    return out


@njit(cache=True)
def block_mean_square(image, block_h, block_w):
    h, w = image.shape
    nby = h // block_h
    nbx = w // block_w
    inv = 1.0 / (block_h * block_w)
    out = np.empty((nby, nbx), dtype=np.float64)
    for by in range(nby):
        for bx in range(nbx):
            acc = 0.0
            for dy in range(block_h):
                for dx in range(block_w):
                    v = image[by * block_h + dy, bx * block_w + dx]
                    acc += v * v
            out[by, bx] = acc * inv
    return out


@njit(cache=True)
def haar2d(image):
    h, w = image.shape
    h2 = h // 2
    w2 = w // 2
    lo = np.empty((h, w2), dtype=np.float64)
    hi = np.empty((h, w2), dtype=np.float64)
    for y in range(h):
        for x in range(w2):
            a = image[y, 2 * x]
            b = image[y, 2 * x + 1]
            lo[y, x] = (a + b) * _INV_SQRT2
            hi[y, x] = (a - b) * _INV_SQRT2

    ll = np.empty((h2, w2), dtype=np.float64)
    lh = np.empty((h2, w2), dtype=np.float64)
    hl = np.empty((h2, w2), dtype=np.float64)
    hh = np.empty((h2, w2), dtype=np.float64)
    for y in range(h2):
        for x in range(w2):
            la = lo[2 * y, x]
            lb = lo[2 * y + 1, x]
            ha = hi[2 * y, x]
            hb = hi[2 * y + 1, x]
            ll[y, x] = (la + lb) * _INV_SQRT2
            hl[y, x] = (la - lb) * _INV_SQRT2
            lh[y, x] = (ha + hb) * _INV_SQRT2
            hh[y, x] = (ha - hb) * _INV_SQRT2
    return ll, lh, hl, hh
