"""Scikit-learn style wrappers around the functional core.

All estimators here are training-free transformers over image batches:
``fit`` validates parameters and precomputes per-configuration state (the
kernel and the patch), ``transform`` maps images in [0, 255] to images in
[0, 255]. Inputs may be a single (H, W, 3) image or an (N, H, W, 3) batch;
outputs mirror the input arrangement.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .attack import (
    AttackConfig,
    apply_noise,
    build_patch,
    hybrid_attack,
    random_noise,
    semi_random_noise,
)
from .frequency import gaussian_kernel, low_pass
from .patterns import PatternSpec
from .tiling import TileConfig, resize_bilinear
from .validation import as_image_batch

__all__ = [
    "HybridImageAttack",
    "FrequencyFilter",
    "RandomNoiseBaseline",
    "SemiRandomNoiseBaseline",
]


class HybridImageAttack(BaseEstimator, TransformerMixin):
    """Training-free adversarial transform built from a repeating pattern.

    The transform keeps each image's low-frequency content (or, with
    ``variant="without-lf"``, the image itself), adds ``lam`` times the
    high-frequency residual of a procedurally drawn concentric pattern that
    has been shrunk and tiled ``tile_scheme`` x ``tile_scheme`` times, and
    clamps the result to the l-infinity ball of radius ``epsilon`` around
    the input.

    Parameters
    ----------
    epsilon : float, default=16.0
        Per-pixel l-infinity budget in 8-bit intensity units.
    lam : float, default=1.0
        Weight of the injected high-frequency content, in (0, 10].
    k : int, default=4
        Gaussian kernel half-width; the kernel is (4k+1) x (4k+1) with
        sigma = k.
    pattern : {"circle", "square", "rhombus"}, default="circle"
        Proto-pattern kind.
    density : int, default=12
        Number of concentric shapes, in [1, 12].
    tile_scheme : int, default=6
        Tile repetitions per side, in [1, 16].
    variant : {"with-lf", "without-lf"}, default="with-lf"
        Whether the image's own high frequencies are suppressed before
        injection.
    canvas : int, default=600
        Pattern raster size in pixels.
    stroke_width : int, default=4
        Ring stroke width at canvas scale.
    intermediate : int, default=300
        Working window side for the crop/tile pipeline.
    crop_anchor : str or (int, int), default="center"
        Where the working window is cropped from the canvas.
    patch : ndarray or None, default=None
        Explicit patch image overriding the procedural pattern; it is
        resized to each target's dimensions.
    seed : int, default=0
        Unused by this transform (kept for config parity with the noise
        baselines).

    Attributes
    ----------
    kernel_ : GaussianKernel
        The normalized Gaussian kernel built at fit time.
    patch_ : ndarray of shape (H, W, 3)
        The patch at the fitted target size.
    target_shape_ : tuple of int
        (H, W) of the images seen during fit.
    """

    def __init__(self, epsilon=16.0, lam=1.0, k=4, pattern="circle", density=12,
                 tile_scheme=6, variant="with-lf", canvas=600, stroke_width=4,
                 intermediate=300, crop_anchor="center", patch=None, seed=0):
        self.epsilon = epsilon
        self.lam = lam
        self.k = k
        self.pattern = pattern
        self.density = density
        self.tile_scheme = tile_scheme
        self.variant = variant
        self.canvas = canvas
        self.stroke_width = stroke_width
        self.intermediate = intermediate
        self.crop_anchor = crop_anchor
        self.patch = patch
        self.seed = seed

    def _config(self, target_h: int, target_w: int) -> AttackConfig:
        return AttackConfig(
            epsilon=self.epsilon,
            lam=self.lam,
            k=self.k,
            variant=self.variant,
            pattern=PatternSpec(
                kind=self.pattern,
                density=self.density,
                canvas=self.canvas,
                stroke_width=self.stroke_width,
            ),
            tile=TileConfig(
                scheme=self.tile_scheme,
                intermediate=self.intermediate,
                target_h=target_h,
                target_w=target_w,
                crop_anchor=self.crop_anchor,
            ),
            seed=self.seed,
        )

    def _patch_for(self, config: AttackConfig) -> np.ndarray:
        if self.patch is not None:
            given = np.asarray(self.patch, dtype=np.float64)
            if given.shape[:2] == (config.tile.target_h, config.tile.target_w):
                return given
            return resize_bilinear(given, config.tile.target_h, config.tile.target_w)
        return build_patch(config.pattern, config.tile)

    def fit(self, X, y=None):
        """Validate parameters and precompute the kernel and patch."""
        batch, _ = as_image_batch(X)
        config = self._config(batch.shape[1], batch.shape[2])
        self.kernel_ = gaussian_kernel(config.k)
        self.patch_ = self._patch_for(config)
        self.target_shape_ = (batch.shape[1], batch.shape[2])
        return self

    def transform(self, X) -> np.ndarray:
        """Attack every image in ``X``; shapes are preserved."""
        check_is_fitted(self, "kernel_")
        batch, single = as_image_batch(X)
        config = self._config(batch.shape[1], batch.shape[2])
        patch = (
            self.patch_
            if (batch.shape[1], batch.shape[2]) == self.target_shape_
            else self._patch_for(config)
        )
        out = np.stack([hybrid_attack(img, patch, config) for img in batch])
        return out[0] if single else out


class FrequencyFilter(BaseEstimator, TransformerMixin):
    """Stateless per-image Gaussian frequency split.

    ``mode="low"`` returns the low-pass of each image; ``mode="high"``
    returns the signed residual. The two modes sum back to the input.

    Parameters
    ----------
    k : int, default=4
        Gaussian kernel half-width.
    mode : {"low", "high"}, default="low"
        Which component to return.
    """

    def __init__(self, k=4, mode="low"):
        self.k = k
        self.mode = mode

    def fit(self, X, y=None):
        if self.mode not in ("low", "high"):
            raise ValueError(f"mode must be 'low' or 'high', got {self.mode!r}")
        self.kernel_ = gaussian_kernel(self.k)
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "kernel_")
        batch, single = as_image_batch(X)
        out = np.empty_like(batch)
        for i, img in enumerate(batch):
            lfc = low_pass(img, self.kernel_)
            out[i] = lfc if self.mode == "low" else img - lfc
        return out[0] if single else out


def _derived_rng(seed: int, index: int) -> np.random.Generator:
    # Per-image stream: independent of processing order and thread count.
    return np.random.default_rng([int(seed), int(index)])


class RandomNoiseBaseline(BaseEstimator, TransformerMixin):
    """Per-pixel sign-noise baseline within the epsilon budget.

    A fraction of (row, col, channel) positions, chosen per image by a
    seeded generator, is perturbed by +/-epsilon; results are deterministic
    given (seed, image index).

    Parameters
    ----------
    epsilon : float, default=16.0
        Perturbation magnitude and l-infinity budget.
    fraction : float, default=1.0
        Fraction of positions to perturb, in [0, 1].
    seed : int, default=0
        Base seed; each image uses a stream derived from (seed, index).
    """

    def __init__(self, epsilon=16.0, fraction=1.0, seed=0):
        self.epsilon = epsilon
        self.fraction = fraction
        self.seed = seed

    def fit(self, X, y=None):
        if not 0.0 <= float(self.fraction) <= 1.0:
            raise ValueError(f"fraction must be in [0, 1], got {self.fraction}")
        if not 0.0 <= float(self.epsilon) <= 255.0:
            raise ValueError(f"epsilon must be in [0, 255], got {self.epsilon}")
        self.fitted_ = True
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "fitted_")
        batch, single = as_image_batch(X)
        out = np.empty_like(batch)
        total = batch.shape[1] * batch.shape[2] * batch.shape[3]
        count = int(round(float(self.fraction) * total))
        for i, img in enumerate(batch):
            rng = _derived_rng(self.seed, i)
            flat = rng.choice(total, size=count, replace=False)
            locations = np.stack(np.unravel_index(flat, img.shape), axis=1)
            noise = random_noise(img.shape, locations, self.epsilon, seed=rng)
            out[i] = apply_noise(img, noise, self.epsilon)
        return out[0] if single else out


class SemiRandomNoiseBaseline(BaseEstimator, TransformerMixin):
    """Whole-row/column sign-noise baseline within the epsilon budget.

    Like ``RandomNoiseBaseline`` but regionally homogeneous: each selected
    slice along ``axis`` carries one +/-epsilon value across its full
    extent.

    Parameters
    ----------
    epsilon : float, default=16.0
        Perturbation magnitude and l-infinity budget.
    fraction : float, default=0.5
        Fraction of slices to perturb, in [0, 1].
    axis : {"h", "w"}, default="h"
        Whether rows or columns are perturbed.
    seed : int, default=0
        Base seed; each image uses a stream derived from (seed, index).
    """

    def __init__(self, epsilon=16.0, fraction=0.5, axis="h", seed=0):
        self.epsilon = epsilon
        self.fraction = fraction
        self.axis = axis
        self.seed = seed

    def fit(self, X, y=None):
        if self.axis not in ("h", "w"):
            raise ValueError(f"axis must be 'h' or 'w', got {self.axis!r}")
        if not 0.0 <= float(self.fraction) <= 1.0:
            raise ValueError(f"fraction must be in [0, 1], got {self.fraction}")
        if not 0.0 <= float(self.epsilon) <= 255.0:
            raise ValueError(f"epsilon must be in [0, 255], got {self.epsilon}")
        self.fitted_ = True
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "fitted_")
        batch, single = as_image_batch(X)
        out = np.empty_like(batch)
        length = batch.shape[1] if self.axis == "h" else batch.shape[2]
        count = int(round(float(self.fraction) * length))
        for i, img in enumerate(batch):
            rng = _derived_rng(self.seed, i)
            indices = rng.choice(length, size=count, replace=False)
            noise = semi_random_noise(img.shape, indices, self.epsilon,
                                      axis=self.axis, seed=rng)
            out[i] = apply_noise(img, noise, self.epsilon)
        return out[0] if single else out
