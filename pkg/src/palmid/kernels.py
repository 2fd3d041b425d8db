"""Backend dispatch for the hot pixel kernels.

Two interchangeable implementations exist: numba-compiled loops
(``_kernels_numba``) and vectorized numpy (``_kernels_numpy``). The numba
backend is used when available; set the environment variable
``PALMID_NO_NUMBA=1`` to force the pure-numpy path. ``use_backend`` switches
at runtime (the benchmark suite uses it to time both).

All wrappers take unpadded float64/bool arrays and handle border padding
here, so the two backends stay drop-in equivalent.
"""

import os

import numpy as np

from .errors import ParameterError

DISABLE_ENV = "PALMID_NO_NUMBA"

from . import _kernels_numpy

_IMPLS = {"numpy": _kernels_numpy}
_active_name = "numpy"


def _load_numba_impl():
    if "numba" not in _IMPLS:
        from . import _kernels_numba
        _IMPLS["numba"] = _kernels_numba
    return _IMPLS["numba"]


def _env_disabled() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() in ("1", "true", "yes", "on")


def use_backend(name: str) -> None:
    """Select the kernel backend ("numba" or "numpy") for this process."""
    global _active_name
    if name not in ("numba", "numpy"):
        raise ParameterError(f"unknown kernel backend {name!r}")
    if name == "numba":
        _load_numba_impl()
    _active_name = name


def active_backend() -> str:
    return _active_name


def _init_backend() -> None:
    global _active_name
    if _env_disabled():
        _active_name = "numpy"
        return
    try:
        _load_numba_impl()
        _active_name = "numba"
    except ImportError:
        _active_name = "numpy"


_init_backend()


def correlate2d(image: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Same-size correlation with replicate (clamp-to-edge) border padding."""
    kh, kw = kernel.shape
    padded = np.pad(image, ((kh // 2, kh // 2), (kw // 2, kw // 2)), mode="edge")
    return _IMPLS[_active_name].correlate2d(padded, kernel, image.shape[0], image.shape[1])


def neighbor_counts(mask: np.ndarray) -> np.ndarray:
    """Count true pixels in each 8-neighborhood; outside the image counts as false."""
    padded = np.pad(mask.astype(np.uint8), 1, mode="constant")
    return _IMPLS[_active_name].neighbor_counts(padded, mask.shape[0], mask.shape[1])


def binary_dilate(mask: np.ndarray, radius: int) -> np.ndarray:
    """Dilate by a square structuring element of side 2*radius+1."""
    if radius == 0:
        return mask.copy()
    padded = np.pad(mask, radius, mode="constant")
    out = _IMPLS[_active_name].binary_dilate(padded, radius, mask.shape[0], mask.shape[1])
    return np.asarray(out, dtype=bool)


def block_mean_square(image: np.ndarray, block_h: int, block_w: int) -> np.ndarray:
    """Mean squared value per non-overlapping block, as a block-grid array."""
    return _IMPLS[_active_name].block_mean_square(image, block_h, block_w)


def haar2d(image: np.ndarray):
    """One separable orthonormal Haar analysis step: (LL, LH, HL, HH).

    First letter names the filter along the row index (vertical), second
    along the column index (horizontal).
    """
    return _IMPLS[_active_name].haar2d(image)
