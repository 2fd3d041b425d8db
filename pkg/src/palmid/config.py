"""Pipeline configuration: defaults, JSON config file, CLI-flag overrides.

Precedence is defaults < config file < CLI flags. The config file is JSON
with three optional top-level keys:

    {
      "line":     {"gaussian_sigma": 1.0, "gaussian_size": 7,
                   "edge_quantile": 0.85, "min_neighbors": 3,
                   "dilate_radius": 1, "block_size": 4},
      "wavelet":  {"levels": 3, "grid": 8},
      "distance_mode": "concat"
    }

Unknown keys are rejected by field name so typos fail loudly.
"""

import json
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ParameterError
from .fusion import DISTANCE_MODES
from .palmline import LinePipelineParams
from .wavelet import WaveletParams

_LINE_FIELDS = tuple(f.name for f in fields(LinePipelineParams))
_WAVELET_FIELDS = tuple(f.name for f in fields(WaveletParams))


@dataclass(frozen=True)
class PipelineConfig:
    line: LinePipelineParams = LinePipelineParams()
    wavelet: WaveletParams = WaveletParams()
    distance_mode: str = "concat"

    def __post_init__(self):
        if self.distance_mode not in DISTANCE_MODES:
            raise ParameterError(
                f"distance_mode must be one of {DISTANCE_MODES}, got {self.distance_mode!r}")

    def to_dict(self) -> dict:
        return {
            "line": {name: getattr(self.line, name) for name in _LINE_FIELDS},
            "wavelet": {name: getattr(self.wavelet, name) for name in _WAVELET_FIELDS},
            "distance_mode": self.distance_mode,
        }


def _check_section(section: dict, allowed, where: str) -> None:
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ParameterError(f"unknown config field(s) in {where}: {', '.join(unknown)}")


def load_config_file(path) -> dict:
    """Read a JSON config file into override dicts (validated field names)."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParameterError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParameterError(f"config file {path} must hold a JSON object")
    _check_section(data, ("line", "wavelet", "distance_mode"), "config root")
    for section_name, allowed in (("line", _LINE_FIELDS), ("wavelet", _WAVELET_FIELDS)):
        section = data.get(section_name, {})
        if not isinstance(section, dict):
            raise ParameterError(f"config section {section_name!r} must be an object")
        _check_section(section, allowed, f"section {section_name!r}")
    return data


def build_config(file_path=None, line_overrides=None, wavelet_overrides=None,
                 distance_mode=None) -> PipelineConfig:
    """Merge defaults, optional config file, and CLI overrides (in that order)."""
    line_kwargs: dict = {}
    wavelet_kwargs: dict = {}
    mode = None
    if file_path is not None:
        data = load_config_file(file_path)
        line_kwargs.update(data.get("line", {}))
        wavelet_kwargs.update(data.get("wavelet", {}))
        mode = data.get("distance_mode", mode)
    for key, value in (line_overrides or {}).items():
        if value is not None:
            line_kwargs[key] = value
    for key, value in (wavelet_overrides or {}).items():
        if value is not None:
            wavelet_kwargs[key] = value
    if distance_mode is not None:
        mode = distance_mode
    return PipelineConfig(
        line=LinePipelineParams(**line_kwargs),
        wavelet=WaveletParams(**wavelet_kwargs),
        distance_mode=mode if mode is not None else "concat",
    )
