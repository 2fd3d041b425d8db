"""Enrollment and gallery persistence.

A template is one enrolled identity: the elementwise average of the line and
wavelet feature vectors over its training samples. A gallery is an ordered,
immutable collection of templates that all share one geometry fingerprint
(image side plus the exact pipeline parameters the features were computed
with), so probe and gallery features are guaranteed comparable.

Gallery file format (version 1, little-endian):

    magic          4 bytes  b"PKGL"
    version        u16
    fp_length      u32      length of the fingerprint JSON blob
    fp_json        bytes    canonical JSON (sorted keys, compact separators)
    fp_crc32       u32      CRC-32 of fp_json
    n_templates    u32
    per template:
        label_len  u16      then label bytes (UTF-8)
        n_train    u32
        line_len   u32      then line_len float64 values
        wav_len    u32      then wav_len float64 values

Feature values are stored as raw IEEE-754 doubles, so save/load round-trips
are bit-exact.
"""

import hashlib
import json
import struct
import zlib
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .dataset import MultispectralSample
from .errors import (
    DataError,
    GalleryIntegrityError,
    GalleryTruncatedError,
    GalleryVersionError,
    ParameterError,
)
from .palmline import LinePipelineParams, line_feature
from .wavelet import WaveletParams, wavelet_feature

MAGIC = b"PKGL"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class GeometryFingerprint:
    """Pins the image geometry and pipeline parameters a gallery was built with."""

    side: int
    line: LinePipelineParams
    wavelet: WaveletParams

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "line": {
                "gaussian_sigma": self.line.gaussian_sigma,
                "gaussian_size": self.line.gaussian_size,
                "edge_quantile": self.line.edge_quantile,
                "min_neighbors": self.line.min_neighbors,
                "dilate_radius": self.line.dilate_radius,
                "block_size": self.line.block_size,
            },
            "wavelet": {
                "levels": self.wavelet.levels,
                "grid": self.wavelet.grid,
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GeometryFingerprint":
        try:
            return cls(
                side=int(data["side"]),
                line=LinePipelineParams(**data["line"]),
                wavelet=WaveletParams(**data["wavelet"]),
            )
        except (KeyError, TypeError) as exc:
            raise GalleryIntegrityError(f"malformed fingerprint block: {exc}") from exc

    def canonical_json(self) -> bytes:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode()

    @property
    def params_hash(self) -> str:
        return hashlib.sha256(self.canonical_json()).hexdigest()

    @property
    def line_length(self) -> int:
        return 4 * (self.side // self.line.block_size) ** 2

    @property
    def wavelet_length(self) -> int:
        return 4 * self.wavelet.levels * 3 * self.wavelet.grid ** 2


@dataclass(eq=False)
class Template:
    """One enrolled identity: averaged feature vectors plus provenance."""

    class_id: str
    line_feature: np.ndarray
    wavelet_feature: np.ndarray
    n_train: int
    fingerprint: GeometryFingerprint

    def __post_init__(self):
        self.line_feature = np.asarray(self.line_feature, dtype=np.float64)
        self.wavelet_feature = np.asarray(self.wavelet_feature, dtype=np.float64)
        if self.n_train < 1:
            raise ParameterError(f"n_train must be >= 1, got {self.n_train}")
        if self.line_feature.shape != (self.fingerprint.line_length,):
            raise DataError(
                f"line feature length {self.line_feature.size} does not match "
                f"fingerprint ({self.fingerprint.line_length})")
        if self.wavelet_feature.shape != (self.fingerprint.wavelet_length,):
            raise DataError(
                f"wavelet feature length {self.wavelet_feature.size} does not match "
                f"fingerprint ({self.fingerprint.wavelet_length})")


@dataclass(eq=False)
class Gallery:
    """Ordered collection of templates sharing one geometry fingerprint."""

    templates: tuple
    fingerprint: GeometryFingerprint
    version: int = FORMAT_VERSION

    def __post_init__(self):
        self.templates = tuple(self.templates)
        ids = [t.class_id for t in self.templates]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise DataError(f"duplicate class ids in gallery: {dupes}")
        for t in self.templates:
            if t.fingerprint != self.fingerprint:
                raise DataError(
                    f"template {t.class_id!r} fingerprint does not match gallery fingerprint")

    def __len__(self) -> int:
        return len(self.templates)

    @property
    def class_ids(self) -> list:
        return [t.class_id for t in self.templates]

    @cached_property
    def line_matrix(self) -> np.ndarray:
        return np.stack([t.line_feature for t in self.templates])

    @cached_property
    def wavelet_matrix(self) -> np.ndarray:
        return np.stack([t.wavelet_feature for t in self.templates])

    def with_template(self, template: Template) -> "Gallery":
        """New gallery with one more template; rejects fingerprint mismatches."""
        if template.class_id in self.class_ids:
            raise DataError(f"class id {template.class_id!r} already enrolled")
        return Gallery(templates=self.templates + (template,),
                       fingerprint=self.fingerprint, version=self.version)


def average_features(class_id: str, line_vectors, wavelet_vectors, n_train: int,
                     fingerprint: GeometryFingerprint) -> Template:
    """Build a template from per-sample feature vectors already extracted."""
    line_avg = np.mean(np.stack(line_vectors), axis=0)
    wav_avg = np.mean(np.stack(wavelet_vectors), axis=0)
    return Template(class_id=class_id, line_feature=line_avg, wavelet_feature=wav_avg,
                    n_train=n_train, fingerprint=fingerprint)


def build_template(class_id: str, samples,
                   line_params: LinePipelineParams = LinePipelineParams(),
                   wavelet_params: WaveletParams = WaveletParams()) -> Template:
    """Enroll one identity by averaging features over its training samples."""
    samples = list(samples)
    if not samples:
        raise ParameterError("cannot build a template from zero samples")
    sides = {s.side for s in samples}
    if len(sides) != 1:
        raise DataError(f"samples disagree on geometry: sides {sorted(sides)}")
    fingerprint = GeometryFingerprint(side=sides.pop(), line=line_params, wavelet=wavelet_params)
    line_vecs = [line_feature(s, line_params).concatenated for s in samples]
    wav_vecs = [wavelet_feature(s, wavelet_params).concatenated for s in samples]
    return average_features(class_id, line_vecs, wav_vecs, len(samples), fingerprint)


def save_gallery(gallery: Gallery, path) -> None:
    fp_json = gallery.fingerprint.canonical_json()
    out = bytearray()
    out += MAGIC
    out += struct.pack("<H", FORMAT_VERSION)
    out += struct.pack("<I", len(fp_json))
    out += fp_json
    out += struct.pack("<I", zlib.crc32(fp_json))
    out += struct.pack("<I", len(gallery.templates))
    for t in gallery.templates:
        label = t.class_id.encode()
        out += struct.pack("<H", len(label))
        out += label
        out += struct.pack("<I", t.n_train)
        out += struct.pack("<I", t.line_feature.size)
        out += np.ascontiguousarray(t.line_feature, dtype="<f8").tobytes()
        out += struct.pack("<I", t.wavelet_feature.size)
        out += np.ascontiguousarray(t.wavelet_feature, dtype="<f8").tobytes()
    Path(path).write_bytes(bytes(out))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise GalleryTruncatedError(
                f"gallery file truncated: needed {n} bytes at offset {self.pos}, "
                f"file has {len(self.data)}")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def load_gallery(path) -> Gallery:
    reader = _Reader(Path(path).read_bytes())
    if reader.take(4) != MAGIC:
        raise GalleryIntegrityError(f"{path}: not a palmid gallery file (bad magic)")
    (version,) = reader.unpack("<H")
    if version != FORMAT_VERSION:
        raise GalleryVersionError(
            f"{path}: unsupported gallery format version {version} "
            f"(supported: {FORMAT_VERSION})")
    (fp_len,) = reader.unpack("<I")
    fp_json = reader.take(fp_len)
    (fp_crc,) = reader.unpack("<I")
    if zlib.crc32(fp_json) != fp_crc:
        raise GalleryIntegrityError(f"{path}: fingerprint block failed its checksum")
    try:
        fp_dict = json.loads(fp_json)
    except json.JSONDecodeError as exc:
        raise GalleryIntegrityError(f"{path}: fingerprint block is not valid JSON") from exc
    fingerprint = GeometryFingerprint.from_dict(fp_dict)

    (n_templates,) = reader.unpack("<I")
    templates = []
    for _ in range(n_templates):
        (label_len,) = reader.unpack("<H")
        label = reader.take(label_len).decode()
        (n_train,) = reader.unpack("<I")
        (line_len,) = reader.unpack("<I")
        line_vec = np.frombuffer(reader.take(8 * line_len), dtype="<f8").copy()
        (wav_len,) = reader.unpack("<I")
        wav_vec = np.frombuffer(reader.take(8 * wav_len), dtype="<f8").copy()
        templates.append(Template(class_id=label, line_feature=line_vec,
                                  wavelet_feature=wav_vec, n_train=n_train,
                                  fingerprint=fingerprint))
    if reader.pos != len(reader.data):
        raise GalleryIntegrityError(
            f"{path}: {len(reader.data) - reader.pos} trailing bytes after last template")
    return Gallery(templates=tuple(templates), fingerprint=fingerprint, version=version)
