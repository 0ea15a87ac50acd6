"""Adversarial image synthesis by frequency swapping, plus noise baselines.

The core operation keeps (or drops) an image's low-frequency content and
injects the weighted high-frequency residual of a repeating geometric patch,
then clamps the result to the l-infinity budget around the original and to
the displayable range. Everything here is a pure function of its inputs;
the only randomness lives in the explicitly seeded noise baselines.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .frequency import GaussianKernel, gaussian_kernel, low_pass
from .patterns import PatternSpec, render
from .tiling import TileConfig, make_patch
from .validation import as_float_image, check_same_shape

__all__ = [
    "VARIANTS",
    "AttackConfig",
    "clip_to_ball",
    "hybrid_raw",
    "hybrid_attack",
    "build_patch",
    "attack_image",
    "random_noise",
    "semi_random_noise",
    "apply_noise",
]

VARIANTS = ("with-lf", "without-lf")


@dataclass(frozen=True)
class AttackConfig:
    """Full reproducibility record for one attack configuration.

    ``epsilon`` is the l-infinity budget in 8-bit intensity units, ``lam``
    weighs the injected high-frequency content, ``k`` sets the Gaussian
    kernel half-width for both the image and the patch, and ``variant``
    chooses whether the image's own high frequencies are suppressed
    ("with-lf") or kept ("without-lf") before injection. ``seed`` only
    affects the noise baselines.
    """

    epsilon: float = 16.0
    lam: float = 1.0
    k: int = 4
    variant: str = "with-lf"
    pattern: PatternSpec = PatternSpec()
    tile: TileConfig = TileConfig()
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= float(self.epsilon) <= 255.0:
            raise ValueError(f"epsilon must be in [0, 255], got {self.epsilon}")
        if not 0.0 < float(self.lam) <= 10.0:
            raise ValueError(f"lam must be in (0, 10], got {self.lam}")
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)):
            raise ValueError(f"k must be an integer, got {self.k!r}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must fit an unsigned 64-bit integer, got {self.seed}")
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "seed", int(self.seed))


def clip_to_ball(values, reference, epsilon: float) -> np.ndarray:
    """Clamp ``values`` to the epsilon-ball around ``reference`` and [0, 255].

    Both constraints form a single box because the reference already lies in
    [0, 255], so one combined clamp is exact.
    """
    ref = np.asarray(reference, dtype=np.float64)
    lower = np.maximum(ref - epsilon, 0.0)
    upper = np.minimum(ref + epsilon, 255.0)
    return np.clip(values, lower, upper)


def hybrid_raw(image, patch, kernel: GaussianKernel, lam: float = 1.0,
               variant: str = "with-lf") -> np.ndarray:
    """Pre-clip blend of image content with the patch's high frequencies.

    ``with-lf`` starts from the image's low-pass; ``without-lf`` starts from
    the image itself. Exposed separately so the linear-in-``lam`` behaviour
    can be exercised without the budget clamp.
    """
    img = as_float_image(image)
    pat = as_float_image(patch, "patch")
    check_same_shape(img, pat, "image and patch")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    patch_hfc = pat - low_pass(pat, kernel)
    base = low_pass(img, kernel) if variant == "with-lf" else img
    return base + lam * patch_hfc


def hybrid_attack(image, patch, config: AttackConfig) -> np.ndarray:
    """Craft the adversarial image for ``image`` using ``patch``.

    Deterministic; the output differs from ``image`` by at most
    ``config.epsilon`` per element and stays in [0, 255].
    """
    img = as_float_image(image)
    kernel = gaussian_kernel(config.k)
    raw = hybrid_raw(img, patch, kernel, config.lam, config.variant)
    return clip_to_ball(raw, img, config.epsilon)


@lru_cache(maxsize=64)
def build_patch(pattern: PatternSpec, tile: TileConfig) -> np.ndarray:
    """Render ``pattern`` and run it through the tile pipeline (cached).

    The returned array is read-only; both configs are frozen, so a given
    pair is rasterized once per process.
    """
    patch = make_patch(render(pattern), tile)
    patch.setflags(write=False)
    return patch


def attack_image(image, config: AttackConfig) -> np.ndarray:
    """Build the configured patch at the image's own size and attack it."""
    img = as_float_image(image)
    tile = replace(config.tile, target_h=img.shape[0], target_w=img.shape[1])
    return hybrid_attack(img, build_patch(config.pattern, tile), config)


def _signs(rng: np.random.Generator, count: int) -> np.ndarray:
    return rng.integers(0, 2, size=count).astype(np.float64) * 2.0 - 1.0


def random_noise(shape, locations, epsilon: float, seed=0) -> np.ndarray:
    """Sparse sign noise: +/-epsilon at the given (row, col, channel) triples.

    Zero everywhere else. Signs come from the seeded generator, drawn in
    sorted location order, so a given (locations, seed) pair always yields
    the same grid. ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    h, w, c = (int(v) for v in shape)
    grid = np.zeros((h, w, c), dtype=np.float64)
    locs = np.asarray(list(locations), dtype=np.intp).reshape(-1, 3)
    if locs.size == 0:
        return grid
    if locs.min() < 0 or np.any(locs.max(axis=0) >= (h, w, c)):
        raise ValueError(f"noise locations out of range for shape {(h, w, c)}")
    locs = np.unique(locs, axis=0)
    rng = np.random.default_rng(seed)
    grid[locs[:, 0], locs[:, 1], locs[:, 2]] = epsilon * _signs(rng, len(locs))
    return grid


def semi_random_noise(shape, indices, epsilon: float, axis: str = "h", seed=0) -> np.ndarray:
    """Slice sign noise: whole rows (axis 'h') or columns ('w') at +/-epsilon.

    One sign draw per selected index fills the entire slice across the other
    spatial axis and all channels; unselected slices stay zero.
    """
    h, w, c = (int(v) for v in shape)
    if axis not in ("h", "w"):
        raise ValueError(f"axis must be 'h' or 'w', got {axis!r}")
    grid = np.zeros((h, w, c), dtype=np.float64)
    idx = np.asarray(sorted({int(i) for i in indices}), dtype=np.intp)
    if idx.size == 0:
        return grid
    limit = h if axis == "h" else w
    if idx.min() < 0 or idx.max() >= limit:
        raise ValueError(f"slice indices out of range for axis {axis!r} of length {limit}")
    rng = np.random.default_rng(seed)
    values = epsilon * _signs(rng, len(idx))
    if axis == "h":
        grid[idx] = values[:, None, None]
    else:
        grid[:, idx] = values[None, :, None]
    return grid


def apply_noise(image, noise, epsilon: float) -> np.ndarray:
    """Add a signed perturbation grid and clamp to the budget and [0, 255]."""
    img = as_float_image(image)
    grid = as_float_image(noise, "noise")
    check_same_shape(img, grid, "image and noise")
    return clip_to_ball(img + grid, img, epsilon)
