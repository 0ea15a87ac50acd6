"""Input-preprocessing defenses applied before classification."""

from __future__ import annotations

import io

import numpy as np
from PIL import Image
from scipy import ndimage

__all__ = ["DEFENSES", "jpeg_roundtrip", "gaussian_blur", "apply_defense"]

DEFENSES = ("jpeg75", "gauss5", "gauss17")


def jpeg_roundtrip(image, quality: int = 75) -> np.ndarray:
    """Re-encode and decode as JPEG at the given quality factor."""
    pixels = np.clip(np.rint(np.asarray(image, dtype=np.float64)), 0, 255).astype(np.uint8)
    buffer = io.BytesIO()
    Image.fromarray(pixels, "RGB").save(buffer, format="JPEG", quality=quality)
    buffer.seek(0)
    with Image.open(buffer) as decoded:
        return np.asarray(decoded.convert("RGB"), dtype=np.float32)


def _profile(k: int) -> np.ndarray:
    offsets = np.arange(-2 * k, 2 * k + 1, dtype=np.float64)
    weights = np.exp(-(offsets**2) / (2.0 * float(k) ** 2))
    return weights / weights.sum()


def gaussian_blur(image, k: int) -> np.ndarray:
    """Unit-sum Gaussian filter on a (4k+1) square support with sigma = k.

    Same kernel family the attack uses, so blur with k=1 is the 5x5 defense
    and k=4 the 17x17 one.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    arr = np.asarray(image, dtype=np.float64)
    profile = _profile(k)
    out = ndimage.correlate1d(arr, profile, axis=0, mode="reflect")
    return ndimage.correlate1d(out, profile, axis=1, mode="reflect").astype(np.float32)


def apply_defense(image, name: str) -> np.ndarray:
    """Dispatch a defense by name over a (H, W, 3) array in [0, 255]."""
    if name == "jpeg75":
        return jpeg_roundtrip(image, quality=75)
    if name == "gauss5":
        return gaussian_blur(image, k=1)
    if name == "gauss17":
        return gaussian_blur(image, k=4)
    raise ValueError(f"unknown defense {name!r}; expected one of {DEFENSES}")
