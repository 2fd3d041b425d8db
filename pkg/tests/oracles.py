"""Independent brute-force reference implementations used across the tests.

Everything here is written as plainly as possible (explicit double loops,
explicit edge clamping, explicit matrices) and deliberately shares no code
with the package, so the tests stay a second opinion rather than an echo.
"""

import numpy as np


def conv_replicate(image: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Correlation-form mask application with clamp-to-edge indexing."""
    h, w = image.shape
    kh, kw = kernel.shape
    ry, rx = kh // 2, kw // 2
    out = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for s in range(-ry, ry + 1):
                for t in range(-rx, rx + 1):
                    yy = min(max(y + s, 0), h - 1)
                    xx = min(max(x + t, 0), w - 1)
                    acc += kernel[s + ry, t + rx] * image[yy, xx]
            out[y, x] = acc
    return out


def sobel_edges(image: np.ndarray, quantile: float) -> np.ndarray:
    gx_k = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
    gx = conv_replicate(image, gx_k)
    gy = conv_replicate(image, gx_k.T)
    magnitude = np.sqrt(gx ** 2 + gy ** 2)
    return (magnitude >= np.quantile(magnitude, quantile)) & (magnitude > 0.0)


def remove_isolated(mask: np.ndarray, min_neighbors: int) -> np.ndarray:
    h, w = mask.shape
    out = np.zeros_like(mask, dtype=bool)
    for y in range(h):
        for x in range(w):
            if not mask[y, x]:
                continue
            count = 0
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    if dy == 0 and dx == 0:
                        continue
                    yy, xx = y + dy, x + dx
                    if 0 <= yy < h and 0 <= xx < w and mask[yy, xx]:
                        count += 1
            out[y, x] = count >= min_neighbors
    return out


def positive_laplacian(image: np.ndarray) -> np.ndarray:
    kernel = np.array([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]])
    return np.maximum(conv_replicate(image, kernel), 0.0)


def dilate(mask: np.ndarray, radius: int) -> np.ndarray:
    h, w = mask.shape
    out = np.zeros_like(mask, dtype=bool)
    for y in range(h):
        for x in range(w):
            hit = False
            for dy in range(-radius, radius + 1):
                for dx in range(-radius, radius + 1):
                    yy, xx = y + dy, x + dx
                    if 0 <= yy < h and 0 <= xx < w and mask[yy, xx]:
                        hit = True
            out[y, x] = hit
    return out


def block_power(image: np.ndarray, block_w: int, block_h: int) -> np.ndarray:
    h, w = image.shape
    values = []
    for by in range(h // block_h):
        for bx in range(w // block_w):
            acc = 0.0
            for dy in range(block_h):
                for dx in range(block_w):
                    acc += image[by * block_h + dy, bx * block_w + dx] ** 2
            values.append(acc / (block_w * block_h))
    return np.array(values)


def extract_lines(image: np.ndarray, params) -> np.ndarray:
    """Compose the five per-step oracles exactly as the pipeline chains them."""
    half = params.gaussian_size // 2
    coords = np.arange(-half, half + 1, dtype=float)
    mm, nn = np.meshgrid(coords, coords, indexing="ij")
    g = np.exp(-(mm ** 2 + nn ** 2) / (2.0 * params.gaussian_sigma ** 2))
    g /= g.sum()
    smoothed = conv_replicate(image, g)
    edges = sobel_edges(smoothed, params.edge_quantile)
    pruned = remove_isolated(edges, params.min_neighbors)
    mask = dilate(pruned, params.dilate_radius)
    return positive_laplacian(smoothed) * mask


def haar_matrix(n: int) -> np.ndarray:
    """Orthonormal single-step Haar analysis matrix: [approx rows; detail rows]."""
    m = np.zeros((n, n))
    inv = 1.0 / np.sqrt(2.0)
    for k in range(n // 2):
        m[k, 2 * k] = inv
        m[k, 2 * k + 1] = inv
        m[n // 2 + k, 2 * k] = inv
        m[n // 2 + k, 2 * k + 1] = -inv
    return m


def dwt2_matrix(image: np.ndarray):
    """Separable 2-D Haar step via explicit matrix products."""
    h, w = image.shape
    f = haar_matrix(h) @ image @ haar_matrix(w).T
    h2, w2 = h // 2, w // 2
    ll = f[:h2, :w2]
    lh = f[:h2, w2:]
    hl = f[h2:, :w2]
    hh = f[h2:, w2:]
    return ll, lh, hl, hh


def decompose_matrix(image: np.ndarray, levels: int):
    """Detail bands (level-major, LH/HL/HH) plus final approx, via the matrix oracle."""
    details = []
    current = image
    for _ in range(levels):
        ll, lh, hl, hh = dwt2_matrix(current)
        details.extend([lh, hl, hh])
        current = ll
    return details, current


def fuse_and_decide(d_line: np.ndarray, d_wavelet: np.ndarray) -> int:
    """Independent re-implementation of normalize + sum + argmin with index ties."""
    ln = [d / (sum(d_line) / len(d_line)) for d in d_line]
    wn = [d / (sum(d_wavelet) / len(d_wavelet)) for d in d_wavelet]
    df = [a + b for a, b in zip(ln, wn)]
    best = 0
    for j in range(1, len(df)):
        if df[j] < df[best]:
            best = j
    return best
