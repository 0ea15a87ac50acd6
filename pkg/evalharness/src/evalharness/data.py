"""Corpus handling: paired directories, decoding, model input conversion."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch
from PIL import Image

__all__ = [
    "IMAGENET_MEAN",
    "IMAGENET_STD",
    "list_images",
    "paired_files",
    "load_image",
    "to_batch",
    "model_input",
]

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)

_SUFFIXES = (".png", ".jpg", ".jpeg")


def list_images(directory) -> list[Path]:
    root = Path(directory)
    if not root.is_dir():
        raise ValueError(f"{root} is not a directory")
    return sorted(p for p in root.iterdir()
                  if p.is_file() and p.suffix.lower() in _SUFFIXES)


def paired_files(clean_dir, adv_dir) -> tuple[list[tuple[Path, Path]], list[str]]:
    """Match files across directories by stem.

    Returns the matched (clean, adv) pairs and the stems of clean files with
    no counterpart; unpaired files are excluded from every metric.
    """
    clean = list_images(clean_dir)
    if not clean:
        raise ValueError(f"no decodable images under {clean_dir}")
    adv_by_stem = {p.stem: p for p in list_images(adv_dir)}
    pairs = []
    missing = []
    for path in clean:
        counterpart = adv_by_stem.get(path.stem)
        if counterpart is None:
            missing.append(path.stem)
        else:
            pairs.append((path, counterpart))
    return pairs, missing


def load_image(path) -> np.ndarray:
    """Decode to (H, W, 3) float32 in [0, 255]."""
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"), dtype=np.float32)


def to_batch(arrays) -> torch.Tensor:
    """Stack (H, W, 3) arrays in [0, 255] into an NCHW float tensor."""
    stacked = np.stack([np.asarray(a, dtype=np.float32) for a in arrays])
    return torch.from_numpy(stacked).permute(0, 3, 1, 2).contiguous()


def model_input(batch: torch.Tensor, normalize: bool = True) -> torch.Tensor:
    """Scale an NCHW [0, 255] batch to model space."""
    scaled = batch / 255.0
    if not normalize:
        return scaled
    mean = torch.tensor(IMAGENET_MEAN).view(1, 3, 1, 1)
    std = torch.tensor(IMAGENET_STD).view(1, 3, 1, 1)
    return (scaled - mean) / std
