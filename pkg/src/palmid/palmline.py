"""Principal-line extraction and line block-power features.

The pipeline: Gaussian smoothing, Sobel edge map, isolated-point pruning,
dilation into an edge mask, and a positive-clamped Laplacian masked by it.
Smoothing happens once and feeds both the edge and the second-derivative
branches. Block powers of the masked Laplacian image, concatenated over the
four spectral bands (R, G, B, NIR), form the line feature vector.
"""

from dataclasses import dataclass

import numpy as np

from . import imgcore
from .dataset import BAND_ORDER, MultispectralSample
from .errors import DataError, ParameterError


@dataclass(frozen=True)
class LinePipelineParams:
    gaussian_sigma: float = 1.0
    gaussian_size: int = 7
    edge_quantile: float = 0.85
    min_neighbors: int = 3
    dilate_radius: int = 1
    block_size: int = 4

    def __post_init__(self):
        if not self.gaussian_sigma > 0:
            raise ParameterError(f"gaussian_sigma must be positive, got {self.gaussian_sigma}")
        if self.gaussian_size < 1 or self.gaussian_size % 2 == 0:
            raise ParameterError(f"gaussian_size must be odd and >= 1, got {self.gaussian_size}")
        if not 0.0 < self.edge_quantile < 1.0:
            raise ParameterError(f"edge_quantile must lie in (0, 1), got {self.edge_quantile}")
        if not 0 <= self.min_neighbors <= 8:
            raise ParameterError(f"min_neighbors must lie in [0, 8], got {self.min_neighbors}")
        if self.dilate_radius < 0:
            raise ParameterError(f"dilate_radius must be >= 0, got {self.dilate_radius}")
        if self.block_size < 1:
            raise ParameterError(f"block_size must be >= 1, got {self.block_size}")


@dataclass(frozen=True)
class LineFeature:
    """Per-band line block-power vectors in R, G, B, NIR order."""

    per_band: tuple

    @property
    def concatenated(self) -> np.ndarray:
        return np.concatenate(self.per_band)


def _check_geometry(image: np.ndarray, params: LinePipelineParams) -> None:
    h, w = image.shape
    if h != w:
        raise ParameterError(f"image must be square, got {w}x{h}")
    if h % params.block_size != 0:
        raise ParameterError(
            f"image side {h} not divisible by block_size {params.block_size}")


def extract_lines(image, params: LinePipelineParams = LinePipelineParams()) -> np.ndarray:
    """Masked second-derivative line image; zero off the dilated edge mask."""
    img = imgcore.as_gray(image)
    _check_geometry(img, params)
    smoothed = imgcore.convolve(
        img, imgcore.gaussian_kernel(params.gaussian_sigma, params.gaussian_size))
    edges = imgcore.sobel_edges(smoothed, params.edge_quantile)
    pruned = imgcore.remove_isolated(edges, params.min_neighbors)
    mask = imgcore.dilate(pruned, params.dilate_radius)
    ridges = imgcore.positive_laplacian(smoothed)
    return ridges * mask


def line_feature_band(image, params: LinePipelineParams = LinePipelineParams()) -> np.ndarray:
    """Block powers of the extracted line image for one spectral band."""
    lines = extract_lines(image, params)
    return imgcore.block_power(lines, params.block_size, params.block_size)


def line_feature(sample: MultispectralSample,
                 params: LinePipelineParams = LinePipelineParams()) -> LineFeature:
    """Line feature for a multispectral sample: band vectors in R, G, B, NIR order."""
    shapes = {band: sample.bands[band].shape for band in BAND_ORDER}
    if len(set(shapes.values())) != 1:
        raise DataError(f"band geometry mismatch: {shapes}")
    per_band = tuple(line_feature_band(sample.bands[band], params) for band in BAND_ORDER)
    return LineFeature(per_band=per_band)
