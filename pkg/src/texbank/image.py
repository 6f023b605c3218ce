"""Image loading and preprocessing: channel extraction, mean removal, padding.

Images are plain numpy arrays: RGB images are uint8 of shape (height, width, 3),
gray images are float64 of shape (height, width).  All downstream math runs in
double precision from the channel-extraction step onward.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from texbank.errors import DomainError, FormatError, IoError

CHANNELS = {"red": 0, "green": 1, "blue": 2}


@dataclass(frozen=True)
class ZeroMeanImage:
    """Square of intensities whose arithmetic mean has been removed.

    ``removed_mean`` records the subtracted value so the original levels can
    be reconstructed.
    """

    values: np.ndarray = field(repr=False)
    removed_mean: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2 or vals.size == 0:
            raise DomainError("zero-mean image must be a nonempty 2-D array")
        object.__setattr__(self, "values", vals)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def load_image(path) -> np.ndarray:
    """Decode a PNG/TIFF/BMP file into a (height, width, 3) uint8 RGB array.

    Raises IoError when the file is missing or unreadable and FormatError
    when the content cannot be decoded as an image.
    """
    path = Path(path)
    if not path.is_file():
        raise IoError(f"no such image file: {path}")
    try:
        with Image.open(path) as img:
            rgb = img.convert("RGB")
            arr = np.asarray(rgb, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise FormatError(f"cannot decode {path}: {exc}") from exc
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.size == 0:
        raise FormatError(f"unexpected image shape {arr.shape} for {path}")
    return arr


def extract_channel(img: np.ndarray, channel: str) -> np.ndarray:
    """Project one color channel of an RGB image to a float64 gray image."""
    if channel not in CHANNELS:
        raise DomainError(f"unknown channel {channel!r}; expected one of {sorted(CHANNELS)}")
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise DomainError(f"expected (h, w, 3) RGB array, got shape {arr.shape}")
    return arr[:, :, CHANNELS[channel]].astype(np.float64)


def subtract_mean(gray: np.ndarray, mask: np.ndarray | None = None) -> ZeroMeanImage:
    """Remove the mean intensity so filters ignore the DC component.

    With ``mask`` given (nonzero = keep), the mean is computed over kept
    pixels only, subtracted inside the mask, and everything outside the mask
    is set to zero; the result still has zero global mean because the kept
    deviations sum to zero.
    """
    vals = np.asarray(gray, dtype=np.float64)
    if vals.ndim != 2 or vals.size == 0:
        raise DomainError("expected a nonempty 2-D gray image")
    if not np.all(np.isfinite(vals)):
        raise DomainError("gray image contains non-finite values")
    if mask is None:
        mean = float(vals.mean())
        return ZeroMeanImage(vals - mean, mean)
    keep = np.asarray(mask) != 0
    if keep.shape != vals.shape:
        raise DomainError(f"mask shape {keep.shape} does not match image shape {vals.shape}")
    if not keep.any():
        raise DomainError("mask keeps no pixels")
    mean = float(vals[keep].mean())
    out = np.where(keep, vals - mean, 0.0)
    return ZeroMeanImage(out, mean)


def _next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p


def pad_to_pow2(img: ZeroMeanImage) -> ZeroMeanImage:
    """Zero-pad to the next power-of-two square, then re-center the mean.

    Content stays at the top-left corner.  Re-subtracting the (tiny) residual
    mean keeps the zero-mean invariant exact after padding.
    """
    h, w = img.values.shape
    side = _next_pow2(max(h, w))
    if h == side and w == side:
        return img
    padded = np.zeros((side, side), dtype=np.float64)
    padded[:h, :w] = img.values
    resid = float(padded.mean())
    return ZeroMeanImage(padded - resid, img.removed_mean + resid)


def apply_mask(gray: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Zero out pixels outside the mask (nonzero = keep)."""
    vals = np.asarray(gray, dtype=np.float64)
    keep = np.asarray(mask) != 0
    if keep.shape != vals.shape:
        raise DomainError(f"mask shape {keep.shape} does not match image shape {vals.shape}")
    return np.where(keep, vals, 0.0)


def load_mask(path, shape: tuple[int, int]) -> np.ndarray:
    """Load an 8-bit mask PNG (nonzero = keep) matching the given image shape."""
    path = Path(path)
    if not path.is_file():
        raise IoError(f"no such mask file: {path}")
    try:
        with Image.open(path) as img:
            arr = np.asarray(img.convert("L"))
    except UnidentifiedImageError as exc:
        raise FormatError(f"cannot decode mask {path}: {exc}") from exc
    except OSError as exc:
        raise IoError(f"cannot read mask {path}: {exc}") from exc
    if arr.shape != shape:
        raise DomainError(f"mask {path} has shape {arr.shape}, image has {shape}")
    return arr
