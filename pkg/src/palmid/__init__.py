"""Multispectral palmprint identification toolkit.

Two block-energy features (principal-line power and Haar wavelet detail
energy) over four spectral bands, fused by mean-normalized distance sums
under a nearest-neighbor decision rule, with enrollment, persistence, and a
repeatable evaluation harness on top.
"""

from .config import PipelineConfig
from .dataset import BAND_ORDER, Corpus, MultispectralSample, load_corpus, split, synth_generate
from .fusion import ScoreTable, decide, identify, identify_sample, normalize, raw_distances
from .gallery import (
    Gallery,
    GeometryFingerprint,
    Template,
    build_template,
    load_gallery,
    save_gallery,
)
from .palmline import LineFeature, LinePipelineParams, extract_lines, line_feature
from .wavelet import WaveletFeature, WaveletParams, decompose, wavelet_feature

__version__ = "0.1.0"

__all__ = [
    "BAND_ORDER",
    "Corpus",
    "Gallery",
    "GeometryFingerprint",
    "LineFeature",
    "LinePipelineParams",
    "MultispectralSample",
    "PipelineConfig",
    "ScoreTable",
    "Template",
    "WaveletFeature",
    "WaveletParams",
    "build_template",
    "decide",
    "decompose",
    "extract_lines",
    "identify",
    "identify_sample",
    "line_feature",
    "load_corpus",
    "load_gallery",
    "normalize",
    "raw_distances",
    "save_gallery",
    "split",
    "synth_generate",
    "wavelet_feature",
    "__version__",
]
