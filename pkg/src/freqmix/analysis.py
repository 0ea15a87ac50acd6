"""Frequency-dominance analysis of feature maps and feature similarity.

A signed high-frequency residual is thresholded into complementary binary
masks marking high- and low-frequency regions; averaging a feature map over
each region tells which kind of content it responds to more strongly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DegenerateInputError",
    "DominanceMaskPair",
    "DominanceStats",
    "build_masks",
    "resize_mask_nearest",
    "dominance",
    "cosine_similarity",
    "format_report",
]


class DegenerateInputError(ValueError):
    """Structurally valid input that carries no usable signal.

    Raised instead of silently returning zeros when a mask region is empty
    or a vector has zero norm.
    """


@dataclass(frozen=True, eq=False)
class DominanceMaskPair:
    """Complementary binary masks of high- and low-frequency regions."""

    m_high: np.ndarray
    m_low: np.ndarray
    tau: float


@dataclass(frozen=True)
class DominanceStats:
    """Mean feature response over each region of one feature map."""

    a_high: float
    a_low: float
    hfc_dominant: bool


def build_masks(hfc, tau: float, reduce: str = "max") -> DominanceMaskPair:
    """Threshold a high-frequency residual into region masks.

    A position is high-frequency when its magnitude strictly exceeds
    ``tau``; entries equal to ``tau`` land in the low mask. For 3-D input,
    ``reduce='max'`` collapses channels with the per-pixel maximum of
    absolute values before thresholding, while ``reduce='none'`` thresholds
    each channel separately and returns masks of the input's full shape.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    arr = np.asarray(hfc, dtype=np.float64)
    if arr.ndim not in (2, 3):
        raise ValueError(f"hfc must be 2-D or 3-D, got shape {arr.shape}")
    if reduce not in ("max", "none"):
        raise ValueError(f"reduce must be 'max' or 'none', got {reduce!r}")
    magnitude = np.abs(arr)
    if reduce == "max" and arr.ndim == 3:
        magnitude = magnitude.max(axis=2)
    m_high = (magnitude > tau).astype(np.uint8)
    return DominanceMaskPair(m_high=m_high, m_low=(1 - m_high).astype(np.uint8), tau=float(tau))


def resize_mask_nearest(mask, out_h: int, out_w: int) -> np.ndarray:
    """Nearest-neighbor rescale of a mask to a feature-map resolution."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"mask must be 2-D, got shape {arr.shape}")
    if out_h < 1 or out_w < 1:
        raise ValueError(f"output size must be positive, got {out_h}x{out_w}")
    rows = np.minimum(((np.arange(out_h) + 0.5) * (arr.shape[0] / out_h)).astype(np.intp),
                      arr.shape[0] - 1)
    cols = np.minimum(((np.arange(out_w) + 0.5) * (arr.shape[1] / out_w)).astype(np.intp),
                      arr.shape[1] - 1)
    return arr[np.ix_(rows, cols)]


def dominance(feature_map, masks: DominanceMaskPair) -> DominanceStats:
    """Mean response of one feature map over each mask region.

    The caller is responsible for bringing masks and feature map to the same
    resolution (see ``resize_mask_nearest``, or decompose a pre-resized
    image instead).

    Raises
    ------
    DegenerateInputError
        If either mask region is empty.
    """
    phi = np.asarray(feature_map, dtype=np.float64)
    if phi.shape != masks.m_high.shape:
        raise ValueError(
            f"feature map shape {phi.shape} does not match mask shape {masks.m_high.shape}"
        )
    weight_high = float(masks.m_high.sum())
    weight_low = float(masks.m_low.sum())
    if weight_high == 0 or weight_low == 0:
        raise DegenerateInputError("a mask region is empty; dominance is undefined")
    a_high = float((phi * masks.m_high).sum() / weight_high)
    a_low = float((phi * masks.m_low).sum() / weight_low)
    return DominanceStats(a_high=a_high, a_low=a_low, hfc_dominant=a_high > a_low)


def cosine_similarity(a, b) -> float:
    """Inner product over product of norms for two equal-length vectors."""
    va = np.asarray(a, dtype=np.float64).ravel()
    vb = np.asarray(b, dtype=np.float64).ravel()
    if va.size == 0 or va.size != vb.size:
        raise ValueError(f"vectors must be non-empty and equal length: {va.size} vs {vb.size}")
    norm_a = np.linalg.norm(va)
    norm_b = np.linalg.norm(vb)
    if norm_a == 0.0 or norm_b == 0.0:
        raise DegenerateInputError("cosine similarity is undefined for zero-norm vectors")
    return float(np.dot(va, vb) / (norm_a * norm_b))


def format_report(stats: Sequence[DominanceStats] | Iterable[DominanceStats]) -> str:
    """Serialize dominance stats, one tab-separated record per feature map."""
    lines = ["# feature_map\ta_high\ta_low\thfc_dominant"]
    for index, entry in enumerate(stats):
        lines.append(
            f"{index}\t{entry.a_high:.9g}\t{entry.a_low:.9g}\t{int(entry.hfc_dominant)}"
        )
    return "\n".join(lines) + "\n"
