"""Low-level image primitives shared by the line and wavelet pipelines.

Images are plain 2-D float64 arrays (grayscale intensities; loaders produce
values in [0, 1] but the operations only require finite values, so scaled
test images stay legal). Binary masks are 2-D bool arrays. Kernels are odd
square float64 arrays.

All operations are pure functions; border handling for linear filters is
replicate (clamp-to-edge) padding so constant images are fixed points and
output size equals input size.
"""

import numpy as np

from . import kernels
from .errors import ParameterError

SOBEL_X = np.array([[-1.0, 0.0, 1.0],
                    [-2.0, 0.0, 2.0],
                    [-1.0, 0.0, 1.0]])
SOBEL_Y = SOBEL_X.T.copy()

LAPLACIAN_4 = np.array([[0.0, 1.0, 0.0],
                        [1.0, -4.0, 1.0],
                        [0.0, 1.0, 0.0]])
LAPLACIAN_8 = np.array([[1.0, 1.0, 1.0],
                        [1.0, -8.0, 1.0],
                        [1.0, 1.0, 1.0]])


def as_gray(image) -> np.ndarray:
    """Validate and return a grayscale image as a 2-D float64 array."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ParameterError("image must be a non-empty 2-D array")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("image contains non-finite values")
    return arr


def as_mask(mask) -> np.ndarray:
    arr = np.asarray(mask)
    if arr.ndim != 2 or arr.size == 0:
        raise ParameterError("mask must be a non-empty 2-D array")
    return arr.astype(bool)


def gaussian_kernel(sigma: float, size: int) -> np.ndarray:
    """Zero-mean isotropic Gaussian sampled on the integer grid, normalized to sum 1."""
    if size < 1 or size % 2 == 0:
        raise ParameterError(f"kernel size must be odd and >= 1, got {size}")
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    half = size // 2
    coords = np.arange(-half, half + 1, dtype=np.float64)
    mm, nn = np.meshgrid(coords, coords, indexing="ij")
    weights = np.exp(-(mm * mm + nn * nn) / (2.0 * sigma * sigma))
    return weights / weights.sum()


def convolve(image, kernel) -> np.ndarray:
    """Apply a square mask in correlation form with replicate border padding."""
    img = as_gray(image)
    k = np.asarray(kernel, dtype=np.float64)
    if k.ndim != 2 or k.shape[0] != k.shape[1] or k.shape[0] % 2 == 0:
        raise ParameterError(f"kernel must be odd and square, got shape {k.shape}")
    if not np.all(np.isfinite(k)):
        raise ParameterError("kernel contains non-finite values")
    if k.shape[0] > img.shape[0] or k.shape[1] > img.shape[1]:
        raise ParameterError(
            f"kernel {k.shape} larger than image {img.shape}")
    return kernels.correlate2d(img, k)


def sobel_edges(image, threshold_quantile: float) -> np.ndarray:
    """Binary edge map from the Sobel gradient magnitude.

    A pixel is an edge when its magnitude reaches the given quantile of the
    image's own magnitude distribution and is nonzero. The comparison is >=
    rather than strict: plateaus of equal gradient (step edges in flat
    surroundings) would otherwise disappear exactly when the quantile lands
    on them; the nonzero condition keeps constant images edge-free.
    """
    img = as_gray(image)
    if not 0.0 < threshold_quantile < 1.0:
        raise ParameterError(
            f"threshold_quantile must lie in (0, 1), got {threshold_quantile}")
    gx = convolve(img, SOBEL_X)
    gy = convolve(img, SOBEL_Y)
    magnitude = np.sqrt(gx * gx + gy * gy)
    threshold = np.quantile(magnitude, threshold_quantile)
    return (magnitude >= threshold) & (magnitude > 0.0)


def remove_isolated(edges, min_neighbors: int) -> np.ndarray:
    """Keep a true pixel only if its 8-neighborhood holds >= min_neighbors true pixels.

    One simultaneous pass: every decision is taken against the input mask, so
    the result does not depend on scan order.
    """
    mask = as_mask(edges)
    if not 0 <= min_neighbors <= 8:
        raise ParameterError(f"min_neighbors must lie in [0, 8], got {min_neighbors}")
    counts = kernels.neighbor_counts(mask)
    return mask & (counts >= min_neighbors)


def positive_laplacian(image, connectivity: int = 4) -> np.ndarray:
    """Second derivative (4- or 8-neighbor Laplacian) with negatives clamped to 0.

    Dark lines on a bright background respond positively under this sign
    convention.
    """
    if connectivity == 4:
        kernel = LAPLACIAN_4
    elif connectivity == 8:
        kernel = LAPLACIAN_8
    else:
        raise ParameterError(f"connectivity must be 4 or 8, got {connectivity}")
    return np.maximum(convolve(image, kernel), 0.0)


def dilate(mask, radius: int) -> np.ndarray:
    """Binary dilation by a square structuring element of side 2*radius+1."""
    m = as_mask(mask)
    if radius < 0:
        raise ParameterError(f"radius must be >= 0, got {radius}")
    return kernels.binary_dilate(m, radius)


def block_power(image, block_w: int, block_h: int) -> np.ndarray:
    """Mean squared intensity per non-overlapping block, flattened row-major.

    Blocks are numbered left-to-right then top-to-bottom.
    """
    img = as_gray(image)
    h, w = img.shape
    if block_w < 1 or block_h < 1:
        raise ParameterError("block dimensions must be >= 1")
    if w % block_w != 0 or h % block_h != 0:
        raise ParameterError(
            f"blocks {block_w}x{block_h} do not tile image {w}x{h}")
    grid = kernels.block_mean_square(img, block_h, block_w)
    return grid.reshape(-1)
