"""Crop / shrink / tile pipeline matching a pattern to a target image size.

A rendered pattern goes through four steps: crop a square working window,
shrink it to one tile, repeat the tile periodically over the working size,
and finally resample the mosaic to the target dimensions. Smaller tiles mean
more repetitions of the same structure in the finished patch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import as_float_image

__all__ = [
    "TileConfig",
    "resize_bilinear",
    "crop_window",
    "build_mosaic",
    "make_patch",
]


@dataclass(frozen=True)
class TileConfig:
    """Parameters of the tiling pipeline.

    ``scheme`` is the number of tile repetitions per side at the working
    resolution: the tile is ``intermediate // scheme`` pixels square, so the
    working window must leave tiles at least 8 px wide to retain structure.
    """

    scheme: int = 6
    intermediate: int = 300
    target_h: int = 299
    target_w: int = 299
    crop_anchor: str | tuple[int, int] = "center"

    def __post_init__(self):
        for name in ("scheme", "intermediate", "target_h", "target_w"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ValueError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if not 1 <= self.scheme <= 16:
            raise ValueError(f"scheme must be in [1, 16], got {self.scheme}")
        if self.intermediate < 1:
            raise ValueError(f"intermediate must be >= 1, got {self.intermediate}")
        if self.intermediate // self.scheme < 8:
            raise ValueError(
                f"tiles of {self.intermediate}//{self.scheme} px are too small "
                "to retain structure (minimum 8)"
            )
        if self.target_h < 1 or self.target_w < 1:
            raise ValueError("target dimensions must be positive")
        anchor = self.crop_anchor
        if isinstance(anchor, str):
            if anchor not in ("center", "top-left"):
                raise ValueError(f"unknown crop anchor {anchor!r}")
        else:
            top, left = (int(v) for v in anchor)
            if top < 0 or left < 0:
                raise ValueError(f"crop offsets must be >= 0, got {anchor!r}")
            object.__setattr__(self, "crop_anchor", (top, left))

    @property
    def tile_size(self) -> int:
        return self.intermediate // self.scheme


def resize_bilinear(image, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resample with half-pixel-center mapping and edge clamping.

    Implemented in lerp form (``a + f * (b - a)``) so constant inputs stay
    bit-identical and same-size resampling is the identity.
    """
    img = as_float_image(image)
    if out_h < 1 or out_w < 1:
        raise ValueError(f"output size must be positive, got {out_h}x{out_w}")
    squeeze = img.ndim == 2
    if squeeze:
        img = img[:, :, np.newaxis]
    in_h, in_w = img.shape[:2]

    def axis_samples(n_out: int, n_in: int):
        pos = (np.arange(n_out, dtype=np.float64) + 0.5) * (n_in / n_out) - 0.5
        low = np.floor(pos).astype(np.intp)
        frac = pos - low
        return np.clip(low, 0, n_in - 1), np.clip(low + 1, 0, n_in - 1), frac

    y0, y1, fy = axis_samples(out_h, in_h)
    x0, x1, fx = axis_samples(out_w, in_w)
    fy = fy[:, None, None]
    fx = fx[None, :, None]

    top = img[np.ix_(y0, x0)]
    top = top + fx * (img[np.ix_(y0, x1)] - top)
    bottom = img[np.ix_(y1, x0)]
    bottom = bottom + fx * (img[np.ix_(y1, x1)] - bottom)
    out = top + fy * (bottom - top)
    return out[:, :, 0] if squeeze else out


def crop_window(image, size: int, anchor: str | tuple[int, int] = "center") -> np.ndarray:
    """Extract a ``size`` x ``size`` window at the given anchor."""
    img = as_float_image(image)
    h, w = img.shape[:2]
    if size > h or size > w:
        raise ValueError(f"cannot crop {size}x{size} from a {h}x{w} image")
    if anchor == "center":
        top, left = (h - size) // 2, (w - size) // 2
    elif anchor == "top-left":
        top, left = 0, 0
    else:
        top, left = (int(v) for v in anchor)
        if top < 0 or left < 0 or top + size > h or left + size > w:
            raise ValueError(f"crop window {anchor!r}+{size} exceeds {h}x{w} image")
    return img[top : top + size, left : left + size].copy()


def build_mosaic(tile, size: int) -> np.ndarray:
    """Repeat ``tile`` periodically and crop top-left to ``size`` x ``size``.

    Padding is periodic continuation, so the result satisfies
    ``mosaic[i, j] == mosaic[i + s, j] == mosaic[i, j + s]`` exactly for
    every in-range index, where ``s`` is the tile side.
    """
    arr = as_float_image(tile)
    reps_y = -(-size // arr.shape[0])
    reps_x = -(-size // arr.shape[1])
    reps = (reps_y, reps_x) + (1,) * (arr.ndim - 2)
    return np.tile(arr, reps)[:size, :size]


def make_patch(proto, cfg: TileConfig) -> np.ndarray:
    """Run a rendered pattern through the full tile pipeline.

    Steps: crop ``cfg.intermediate`` square window, shrink it to one tile of
    ``cfg.tile_size`` px, repeat the tile back up to the working size, then
    resample to ``(cfg.target_h, cfg.target_w)``.
    """
    img = as_float_image(proto)
    if min(img.shape[0], img.shape[1]) < cfg.intermediate:
        raise ValueError(
            f"pattern {img.shape[0]}x{img.shape[1]} is smaller than the "
            f"{cfg.intermediate} px working window"
        )
    window = crop_window(img, cfg.intermediate, cfg.crop_anchor)
    tile = resize_bilinear(window, cfg.tile_size, cfg.tile_size)
    mosaic = build_mosaic(tile, cfg.intermediate)
    return resize_bilinear(mosaic, cfg.target_h, cfg.target_w)
