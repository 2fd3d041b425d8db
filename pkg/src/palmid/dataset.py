"""Corpus ingestion and deterministic synthetic palm generation.

On-disk layout (one directory per subject, four 8-bit grayscale band files
per sample):

    <root>/<subject_id>/<sample_index>_<band>.png    band in {R, G, B, N}

PGM (binary P5) is accepted alongside PNG. Intensities are scaled to [0, 1]
on load. The synthetic generator stands in for license-restricted palm
databases: per subject it draws a handful of smooth dark curves plus a
band-limited texture, and per sample applies a small affine jitter, additive
noise, and per-band brightness/contrast variation.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DataError, ParameterError

BAND_ORDER = ("R", "G", "B", "N")
_EXTENSIONS = (".png", ".pgm")


@dataclass(frozen=True)
class MultispectralSample:
    """One palm capture: four aligned grayscale band images."""

    subject_id: str
    sample_index: int
    bands: dict

    def __post_init__(self):
        if set(self.bands) != set(BAND_ORDER):
            raise DataError(
                f"sample must carry exactly bands {BAND_ORDER}, got {sorted(self.bands)}")
        shapes = {b: self.bands[b].shape for b in BAND_ORDER}
        if len(set(shapes.values())) != 1:
            raise DataError(f"band geometry mismatch: {shapes}")
        h, w = self.bands["R"].shape
        if h != w:
            raise DataError(f"band images must be square, got {w}x{h}")
        if h % 8 != 0:
            raise DataError(f"image side must be divisible by 8, got {h}")

    @property
    def side(self) -> int:
        return self.bands["R"].shape[0]


@dataclass
class Corpus:
    """Samples grouped by subject, all sharing one geometry."""

    samples: dict
    side: int
    warnings: list = field(default_factory=list)

    @property
    def subject_ids(self) -> list:
        return sorted(self.samples)

    @property
    def n_samples(self) -> int:
        return sum(len(v) for v in self.samples.values())

    def iter_samples(self):
        for subject in self.subject_ids:
            yield from self.samples[subject]


def _read_band(path: Path) -> np.ndarray:
    with Image.open(path) as img:
        if img.mode != "L":
            raise DataError(f"{path.name}: expected 8-bit grayscale, got mode {img.mode}")
        return np.asarray(img, dtype=np.float64) / 255.0


def load_sample(prefix, subject_id: str = "probe", sample_index: int = 0) -> MultispectralSample:
    """Load one sample from band files ``<prefix>_R.png`` (or .pgm) etc."""
    prefix = Path(prefix)
    bands = {}
    for band in BAND_ORDER:
        for ext in _EXTENSIONS:
            path = prefix.parent / f"{prefix.name}_{band}{ext}"
            if path.exists():
                bands[band] = _read_band(path)
                break
        else:
            raise DataError(f"missing band {band} for sample prefix {prefix}")
    return MultispectralSample(subject_id=subject_id, sample_index=sample_index, bands=bands)


def load_corpus(root_dir) -> Corpus:
    """Load every complete sample under root_dir; collect per-sample warnings."""
    root = Path(root_dir)
    if not root.is_dir():
        raise DataError(f"corpus root {root} is not a directory")

    samples: dict = {}
    warnings: list = []
    side = None
    for subject_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        subject = subject_dir.name
        groups: dict = {}
        for path in subject_dir.iterdir():
            if path.suffix not in _EXTENSIONS:
                continue
            stem = path.stem
            if "_" not in stem:
                continue
            index_part, band = stem.rsplit("_", 1)
            if band not in BAND_ORDER or not index_part.isdigit():
                continue
            groups.setdefault(int(index_part), {})[band] = path

        for index in sorted(groups):
            paths = groups[index]
            missing = [b for b in BAND_ORDER if b not in paths]
            if missing:
                warnings.append(
                    f"{subject}/{index}: missing band(s) {','.join(missing)}; sample skipped")
                continue
            try:
                bands = {b: _read_band(paths[b]) for b in BAND_ORDER}
                sample = MultispectralSample(subject_id=subject, sample_index=index, bands=bands)
            except (DataError, OSError) as exc:
                warnings.append(f"{subject}/{index}: {exc}; sample skipped")
                continue
            if side is None:
                side = sample.side
            elif sample.side != side:
                warnings.append(
                    f"{subject}/{index}: geometry {sample.side} differs from corpus "
                    f"geometry {side}; sample skipped")
                continue
            samples.setdefault(subject, []).append(sample)

    if not samples:
        raise DataError(f"no complete samples found under {root}")
    return Corpus(samples=samples, side=side, warnings=warnings)


def write_corpus(corpus: Corpus, root_dir, fmt: str = "png") -> None:
    """Write a corpus in the documented directory layout (8-bit files)."""
    if fmt not in ("png", "pgm"):
        raise ParameterError(f"format must be 'png' or 'pgm', got {fmt!r}")
    root = Path(root_dir)
    for sample in corpus.iter_samples():
        subject_dir = root / sample.subject_id
        subject_dir.mkdir(parents=True, exist_ok=True)
        for band in BAND_ORDER:
            data = np.round(np.clip(sample.bands[band], 0.0, 1.0) * 255.0).astype(np.uint8)
            Image.fromarray(data, mode="L").save(
                subject_dir / f"{sample.sample_index}_{band}.{fmt}")


def _affine_warp(image: np.ndarray, angle: float, ty: float, tx: float) -> np.ndarray:
    """Bilinear warp by rotation about the center plus translation; replicate edges."""
    h, w = image.shape
    cy = (h - 1) / 2.0
    cx = (w - 1) / 2.0
    yy, xx = np.meshgrid(np.arange(h, dtype=np.float64),
                         np.arange(w, dtype=np.float64), indexing="ij")
    # inverse map: rotate output coords by -angle, undo translation
    ca = math.cos(angle)
    sa = math.sin(angle)
    ry = yy - cy - ty
    rx = xx - cx - tx
    sy = ca * ry + sa * rx + cy
    sx = -sa * ry + ca * rx + cx
    sy = np.clip(sy, 0.0, h - 1.0)
    sx = np.clip(sx, 0.0, w - 1.0)
    y0 = np.floor(sy).astype(np.int64)
    x0 = np.floor(sx).astype(np.int64)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = sy - y0
    fx = sx - x0
    top = image[y0, x0] * (1.0 - fx) + image[y0, x1] * fx
    bottom = image[y1, x0] * (1.0 - fx) + image[y1, x1] * fx
    return top * (1.0 - fy) + bottom * fy


def _bezier(points: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Evaluate a cubic Bezier defined by 4 control points at parameters ts."""
    p0, p1, p2, p3 = points
    u = 1.0 - ts
    coef = np.stack([u ** 3, 3 * u ** 2 * ts, 3 * u * ts ** 2, ts ** 3], axis=1)
    return coef @ np.stack([p0, p1, p2, p3])


def _stamp_curve(canvas: np.ndarray, pts: np.ndarray, depth: float, sigma: float) -> None:
    """Max-composite a Gaussian-profile dark curve onto the depth canvas."""
    h, w = canvas.shape
    reach = max(1, int(math.ceil(3.0 * sigma)))
    offsets = np.arange(-reach, reach + 1, dtype=np.float64)
    for cy, cx in pts:
        iy = int(round(cy))
        ix = int(round(cx))
        y_lo = max(iy - reach, 0)
        y_hi = min(iy + reach, h - 1)
        x_lo = max(ix - reach, 0)
        x_hi = min(ix + reach, w - 1)
        if y_lo > y_hi or x_lo > x_hi:
            continue
        dy = (iy + offsets)[y_lo - (iy - reach):y_hi - (iy - reach) + 1] - cy
        dx = (ix + offsets)[x_lo - (ix - reach):x_hi - (ix - reach) + 1] - cx
        patch = depth * np.exp(-(dy[:, None] ** 2 + dx[None, :] ** 2) / (2.0 * sigma * sigma))
        region = canvas[y_lo:y_hi + 1, x_lo:x_hi + 1]
        np.maximum(region, patch, out=region)


def _bandlimited_texture(rng: np.random.Generator, side: int, amplitude: float) -> np.ndarray:
    """Smooth subject-specific texture: low-pass filtered white noise."""
    white = rng.standard_normal((side, side))
    spectrum = np.fft.fft2(white)
    freqs = np.fft.fftfreq(side)
    fy, fx = np.meshgrid(freqs, freqs, indexing="ij")
    keep = np.sqrt(fy * fy + fx * fx) <= (1.0 / 16.0)
    smooth = np.real(np.fft.ifft2(spectrum * keep))
    std = smooth.std()
    if std > 0:
        smooth /= std
    return amplitude * smooth


def _subject_identity(seed: int, subject_idx: int, side: int):
    """Deterministic per-subject ideal palm image (before any per-sample jitter)."""
    rng = np.random.default_rng([seed, 0, subject_idx])
    background = 0.75 + 0.10 * rng.random()
    n_curves = int(rng.integers(3, 6))
    depth_map = np.zeros((side, side))
    ts = np.linspace(0.0, 1.0, max(6 * side, 64))
    margin = 0.08 * side
    for _ in range(n_curves):
        control = margin + rng.random((4, 2)) * (side - 1 - 2 * margin)
        pts = _bezier(control, ts)
        depth = 0.25 + 0.20 * rng.random()
        sigma = 1.0 + 0.8 * rng.random()
        _stamp_curve(depth_map, pts, depth, sigma)
    texture = _bandlimited_texture(rng, side, amplitude=0.02 + 0.02 * rng.random())
    ideal = np.clip(background - depth_map + texture, 0.0, 1.0)
    return ideal


def synth_generate(n_subjects: int, n_samples: int, side: int, seed: int) -> Corpus:
    """Generate a deterministic synthetic multispectral corpus.

    Fully determined by its arguments: subject identities and per-sample
    jitters come from independent seed-derived streams, so generation order
    does not matter. Intensities are quantized to 8-bit levels so a
    write/load round-trip is exact.
    """
    if n_subjects < 1 or n_samples < 1:
        raise ParameterError("n_subjects and n_samples must be >= 1")
    if side < 8 or side % 8 != 0:
        raise ParameterError(f"side must be a positive multiple of 8, got {side}")

    width = max(3, len(str(n_subjects - 1)))
    samples: dict = {}
    for subject_idx in range(n_subjects):
        subject_id = f"s{subject_idx:0{width}d}"
        ideal = _subject_identity(seed, subject_idx, side)
        subject_samples = []
        for sample_idx in range(n_samples):
            rng = np.random.default_rng([seed, 1, subject_idx, sample_idx])
            angle = math.radians(rng.uniform(-3.0, 3.0))
            ty, tx = rng.uniform(-2.5, 2.5, size=2)
            warped = _affine_warp(ideal, angle, ty, tx)
            bands = {}
            for band in BAND_ORDER:
                contrast = rng.uniform(0.80, 1.20)
                brightness = rng.uniform(-0.05, 0.05)
                noise = rng.normal(0.0, 0.012, size=warped.shape)
                img = contrast * (warped - 0.5) + 0.5 + brightness + noise
                bands[band] = np.round(np.clip(img, 0.0, 1.0) * 255.0) / 255.0
            subject_samples.append(MultispectralSample(
                subject_id=subject_id, sample_index=sample_idx, bands=bands))
        samples[subject_id] = subject_samples
    return Corpus(samples=samples, side=side)


def split(corpus: Corpus, n_train: int, seed=None):
    """Partition each subject's samples into train/test.

    With a seed, the per-subject partition is a random draw (subjects are
    visited in sorted order from one generator, so the result is a pure
    function of corpus and seed). With seed=None the first n_train samples
    by index are the training set.
    """
    if n_train < 1:
        raise ParameterError(f"n_train must be >= 1, got {n_train}")
    for subject in corpus.subject_ids:
        if len(corpus.samples[subject]) <= n_train:
            raise ParameterError(
                f"subject {subject} has {len(corpus.samples[subject])} samples; "
                f"need more than n_train={n_train}")

    rng = np.random.default_rng(seed) if seed is not None else None
    train: dict = {}
    test: dict = {}
    for subject in corpus.subject_ids:
        ordered = sorted(corpus.samples[subject], key=lambda s: s.sample_index)
        if rng is None:
            train_idx = set(range(n_train))
        else:
            train_idx = set(rng.permutation(len(ordered))[:n_train].tolist())
        train[subject] = [s for i, s in enumerate(ordered) if i in train_idx]
        test[subject] = [s for i, s in enumerate(ordered) if i not in train_idx]
    return (Corpus(samples=train, side=corpus.side),
            Corpus(samples=test, side=corpus.side))
