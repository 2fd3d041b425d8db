"""Orthonormal Haar DWT and detail-band block-energy features.

The 1-D analysis step pairs indices (2k, 2k+1): approx = (s[2k]+s[2k+1])/sqrt2,
detail = (s[2k]-s[2k+1])/sqrt2. The 2-D step applies it along rows then
columns; in band names the first letter is the filter along the row index
(vertical), the second along the column index (horizontal). A 3-level
decomposition yields 9 detail bands; features are their per-block mean
squared values, ordered level 1..levels with LH, HL, HH inside each level.
That ordering is part of the gallery file contract.

The inverse transform lives here too; it exists to verify perfect
reconstruction in tests and plays no part in feature extraction.
"""

from dataclasses import dataclass

import numpy as np

from . import imgcore, kernels
from .dataset import BAND_ORDER, MultispectralSample
from .errors import DataError, ParameterError

_INV_SQRT2 = 1.0 / np.sqrt(2.0)

ORIENTATIONS = ("LH", "HL", "HH")


@dataclass(frozen=True)
class WaveletParams:
    levels: int = 3
    grid: int = 8

    def __post_init__(self):
        if self.levels < 1:
            raise ParameterError(f"levels must be >= 1, got {self.levels}")
        if self.grid < 1:
            raise ParameterError(f"grid must be >= 1, got {self.grid}")


@dataclass(frozen=True)
class DetailBand:
    level: int
    orientation: str
    data: np.ndarray


@dataclass(frozen=True)
class Decomposition:
    details: tuple
    approx: np.ndarray


@dataclass(frozen=True)
class WaveletFeature:
    """Per-band wavelet block-energy vectors in R, G, B, NIR order."""

    per_band: tuple

    @property
    def concatenated(self) -> np.ndarray:
        return np.concatenate(self.per_band)


def haar_step_1d(signal):
    """One orthonormal Haar analysis step on an even-length 1-D signal."""
    s = np.asarray(signal, dtype=np.float64)
    if s.ndim != 1:
        raise ParameterError(f"signal must be 1-D, got {s.ndim}-D")
    if s.size < 2 or s.size % 2 != 0:
        raise ParameterError(f"signal length must be even and >= 2, got {s.size}")
    approx = (s[0::2] + s[1::2]) * _INV_SQRT2
    detail = (s[0::2] - s[1::2]) * _INV_SQRT2
    return approx, detail


def inverse_haar_step_1d(approx, detail):
    a = np.asarray(approx, dtype=np.float64)
    d = np.asarray(detail, dtype=np.float64)
    if a.shape != d.shape or a.ndim != 1:
        raise ParameterError("approx and detail must be 1-D with equal length")
    out = np.empty(2 * a.size)
    out[0::2] = (a + d) * _INV_SQRT2
    out[1::2] = (a - d) * _INV_SQRT2
    return out


def dwt2_step(image):
    """One 2-D Haar step: rows then columns; returns (LL, LH, HL, HH) at half size."""
    img = imgcore.as_gray(image)
    h, w = img.shape
    if h % 2 != 0 or w % 2 != 0:
        raise ParameterError(f"both sides must be even, got {w}x{h}")
    return kernels.haar2d(img)


def idwt2_step(ll, lh, hl, hh):
    """Inverse of dwt2_step (testing support)."""
    ll, lh, hl, hh = (np.asarray(b, dtype=np.float64) for b in (ll, lh, hl, hh))
    h2, w2 = ll.shape
    lo = np.empty((2 * h2, w2))
    hi = np.empty((2 * h2, w2))
    lo[0::2, :] = (ll + hl) * _INV_SQRT2
    lo[1::2, :] = (ll - hl) * _INV_SQRT2
    hi[0::2, :] = (lh + hh) * _INV_SQRT2
    hi[1::2, :] = (lh - hh) * _INV_SQRT2
    out = np.empty((2 * h2, 2 * w2))
    out[:, 0::2] = (lo + hi) * _INV_SQRT2
    out[:, 1::2] = (lo - hi) * _INV_SQRT2
    return out


def decompose(image, params: WaveletParams = WaveletParams()) -> Decomposition:
    """Iterated 2-D Haar decomposition of the LL band."""
    img = imgcore.as_gray(image)
    h, w = img.shape
    factor = 2 ** params.levels
    if h % factor != 0 or w % factor != 0:
        raise ParameterError(
            f"image {w}x{h} not divisible by 2^levels = {factor}")
    details = []
    current = img
    for level in range(1, params.levels + 1):
        ll, lh, hl, hh = dwt2_step(current)
        for orientation, band in zip(ORIENTATIONS, (lh, hl, hh)):
            details.append(DetailBand(level=level, orientation=orientation, data=band))
        current = ll
    return Decomposition(details=tuple(details), approx=current)


def reconstruct(decomposition: Decomposition) -> np.ndarray:
    """Invert decompose (testing support)."""
    by_level: dict = {}
    for band in decomposition.details:
        by_level.setdefault(band.level, {})[band.orientation] = band.data
    current = decomposition.approx
    for level in sorted(by_level, reverse=True):
        bands = by_level[level]
        current = idwt2_step(current, bands["LH"], bands["HL"], bands["HH"])
    return current


def wavelet_feature_band(image, params: WaveletParams = WaveletParams()) -> np.ndarray:
    """Block mean-squared values of every detail band, concatenated.

    Each detail band is divided into grid x grid blocks regardless of its
    resolution, so the vector length is levels * 3 * grid^2.
    """
    decomposition = decompose(image, params)
    pieces = []
    for band in decomposition.details:
        h, w = band.data.shape
        if h % params.grid != 0 or w % params.grid != 0:
            raise ParameterError(
                f"detail band {w}x{h} at level {band.level} not divisible "
                f"by grid {params.grid}")
        pieces.append(imgcore.block_power(band.data, w // params.grid, h // params.grid))
    return np.concatenate(pieces)


def wavelet_feature(sample: MultispectralSample,
                    params: WaveletParams = WaveletParams()) -> WaveletFeature:
    """Wavelet feature for a multispectral sample: band vectors in R, G, B, NIR order."""
    shapes = {band: sample.bands[band].shape for band in BAND_ORDER}
    if len(set(shapes.values())) != 1:
        raise DataError(f"band geometry mismatch: {shapes}")
    per_band = tuple(wavelet_feature_band(sample.bands[band], params) for band in BAND_ORDER)
    return WaveletFeature(per_band=per_band)
