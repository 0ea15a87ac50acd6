"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np


def as_float_image(x, name: str = "image") -> np.ndarray:
    """Coerce ``x`` to a float64 array shaped (H, W) or (H, W, C).

    Values are not range-checked: frequency residuals are legitimately
    signed, so only shape and finiteness are enforced here.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim not in (2, 3):
        raise ValueError(f"{name} must be 2-D or 3-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} has an empty spatial axis: {arr.shape}")
    if arr.ndim == 3 and arr.shape[2] < 1:
        raise ValueError(f"{name} has no channels: {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_image_batch(X, name: str = "X") -> tuple[np.ndarray, bool]:
    """Coerce ``X`` to a (N, H, W, C) float64 batch.

    Accepts a single (H, W, C) image or a stack of them. Returns the batch
    and a flag telling whether the input was a single image, so callers can
    mirror the input arrangement on output.
    """
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 3:
        single = True
        arr = arr[np.newaxis]
    elif arr.ndim == 4:
        single = False
    else:
        raise ValueError(
            f"{name} must be one (H, W, C) image or an (N, H, W, C) batch, "
            f"got shape {arr.shape}"
        )
    if arr.shape[0] < 1:
        raise ValueError(f"{name} is an empty batch")
    if min(arr.shape[1:]) < 1:
        raise ValueError(f"{name} has an empty axis: {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr, single


def check_same_shape(a: np.ndarray, b: np.ndarray, what: str = "inputs") -> None:
    if a.shape != b.shape:
        raise ValueError(f"{what} must share a shape: {a.shape} vs {b.shape}")
