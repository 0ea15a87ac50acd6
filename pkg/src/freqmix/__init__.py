"""Training-free adversarial images from frequency-swapped geometric patterns.

The package splits images into low- and high-frequency components with a
normalized Gaussian kernel, rasterizes repeating concentric patterns, and
blends a pattern's high frequencies into an image's low frequencies under an
l-infinity budget. Scikit-learn style transformers wrap the functional core;
a CLI drives corpus-scale runs.
"""

from .analysis import (
    DegenerateInputError,
    DominanceMaskPair,
    DominanceStats,
    build_masks,
    cosine_similarity,
    dominance,
    format_report,
    resize_mask_nearest,
)
from .attack import (
    AttackConfig,
    apply_noise,
    attack_image,
    build_patch,
    clip_to_ball,
    hybrid_attack,
    hybrid_raw,
    random_noise,
    semi_random_noise,
)
from .estimators import (
    FrequencyFilter,
    HybridImageAttack,
    RandomNoiseBaseline,
    SemiRandomNoiseBaseline,
)
from .frequency import FrequencyPair, GaussianKernel, decompose, gaussian_kernel, low_pass
from .patterns import DEFAULT_PALETTE, KINDS, PatternSpec, render
from .tensorfile import read_tensor, write_tensor
from .tiling import TileConfig, build_mosaic, crop_window, make_patch, resize_bilinear

__version__ = "0.1.0"

__all__ = [
    "AttackConfig",
    "DEFAULT_PALETTE",
    "DegenerateInputError",
    "DominanceMaskPair",
    "DominanceStats",
    "FrequencyFilter",
    "FrequencyPair",
    "GaussianKernel",
    "HybridImageAttack",
    "KINDS",
    "PatternSpec",
    "RandomNoiseBaseline",
    "SemiRandomNoiseBaseline",
    "TileConfig",
    "apply_noise",
    "attack_image",
    "build_masks",
    "build_mosaic",
    "build_patch",
    "clip_to_ball",
    "cosine_similarity",
    "crop_window",
    "decompose",
    "dominance",
    "format_report",
    "gaussian_kernel",
    "hybrid_attack",
    "hybrid_raw",
    "low_pass",
    "make_patch",
    "random_noise",
    "read_tensor",
    "render",
    "resize_bilinear",
    "resize_mask_nearest",
    "semi_random_noise",
    "write_tensor",
]
