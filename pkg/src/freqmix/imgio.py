"""Image file IO: 8-bit RGB PNG/JPEG in, PNG out.

Quantization to 8-bit uses round-half-to-even and happens only at write
time; everything upstream stays in double precision.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

__all__ = [
    "SUPPORTED_SUFFIXES",
    "load_image",
    "list_images",
    "quantize",
    "quantize_within_ball",
    "save_png",
]

SUPPORTED_SUFFIXES = (".png", ".jpg", ".jpeg")


def load_image(path) -> np.ndarray:
    """Decode an image file to a (H, W, 3) float64 array in [0, 255]."""
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"), dtype=np.float64)


def list_images(directory) -> list[Path]:
    """Decodable image files in ``directory``, sorted by name."""
    root = Path(directory)
    if not root.is_dir():
        raise ValueError(f"{root} is not a directory")
    return sorted(
        p for p in root.iterdir()
        if p.is_file() and p.suffix.lower() in SUPPORTED_SUFFIXES
    )


def quantize(image) -> np.ndarray:
    """Round-half-to-even to uint8, clamping to [0, 255]."""
    return np.clip(np.rint(np.asarray(image, dtype=np.float64)), 0, 255).astype(np.uint8)


def quantize_within_ball(adversarial, original, epsilon: float) -> np.ndarray:
    """Quantize to uint8 without leaving the integer epsilon-ball.

    For 8-bit originals and integer ``epsilon`` this is plain rounding; for
    fractional budgets it additionally clamps to the integers inside the
    ball so the on-disk pair never violates the constraint.
    """
    ref = np.asarray(original, dtype=np.float64)
    lower = np.maximum(np.ceil(ref - epsilon), 0.0)
    upper = np.minimum(np.floor(ref + epsilon), 255.0)
    rounded = np.rint(np.asarray(adversarial, dtype=np.float64))
    return np.clip(rounded, lower, upper).astype(np.uint8)


def save_png(path, image) -> None:
    """Write an image (uint8, or float to be quantized) as PNG."""
    arr = np.asarray(image)
    if arr.dtype != np.uint8:
        arr = quantize(arr)
    Image.fromarray(arr, mode="RGB").save(path, format="PNG")
