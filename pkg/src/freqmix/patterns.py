"""Deterministic rasterization of concentric geometric patterns.

Patterns are drawn as hard-edged distance bands rather than stroked vector
paths: a pixel belongs to ring ``m`` when its distance from the canvas
center, measured in the norm matching the pattern kind (L2 for circles,
max-norm for squares, L1 for rhombi), lies within half a stroke width of the
ring radius. No antialiasing, no randomness: renders are bit-reproducible
and exactly invariant under 90-degree rotation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["KINDS", "DEFAULT_PALETTE", "PatternSpec", "render"]

KINDS = ("circle", "square", "rhombus")

# Saturated hues on black maximize per-channel high-frequency edge content.
DEFAULT_PALETTE = (
    (255, 0, 0),
    (0, 255, 0),
    (0, 0, 255),
    (255, 255, 0),
    (255, 0, 255),
    (0, 255, 255),
)


def _as_rgb(value, what: str) -> tuple[int, int, int]:
    triple = tuple(int(v) for v in value)
    if len(triple) != 3 or any(not 0 <= v <= 255 for v in triple):
        raise ValueError(f"{what} must be an RGB triple in [0, 255], got {value!r}")
    return triple


@dataclass(frozen=True)
class PatternSpec:
    """Parameters of a concentric pattern render.

    ``density`` counts the concentric shapes; ring colors cycle through
    ``palette`` from the innermost shape outward.
    """

    kind: str = "circle"
    density: int = 12
    canvas: int = 600
    stroke_width: int = 4
    palette: tuple[tuple[int, int, int], ...] = DEFAULT_PALETTE
    background: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if isinstance(self.density, bool) or not isinstance(self.density, (int, np.integer)):
            raise ValueError(f"density must be an integer, got {self.density!r}")
        if not 1 <= self.density <= 12:
            raise ValueError(f"density must be in [1, 12], got {self.density}")
        if int(self.stroke_width) < 1:
            raise ValueError(f"stroke_width must be >= 1, got {self.stroke_width}")
        object.__setattr__(self, "density", int(self.density))
        object.__setattr__(self, "canvas", int(self.canvas))
        object.__setattr__(self, "stroke_width", int(self.stroke_width))
        if self.canvas < 2 * self.stroke_width * self.density:
            raise ValueError(
                f"canvas {self.canvas} too small for {self.density} shapes of "
                f"stroke width {self.stroke_width}"
            )
        if len(self.palette) == 0:
            raise ValueError("palette must not be empty")
        object.__setattr__(
            self, "palette", tuple(_as_rgb(c, "palette entry") for c in self.palette)
        )
        object.__setattr__(self, "background", _as_rgb(self.background, "background"))

    def radii(self) -> list[float]:
        """Evenly spaced ring radii, innermost first."""
        step = (self.canvas / 2.0 - self.stroke_width) / self.density
        return [m * step for m in range(1, self.density + 1)]


def _distance_field(spec: PatternSpec) -> np.ndarray:
    coords = np.arange(spec.canvas, dtype=np.float64) - (spec.canvas - 1) / 2.0
    dy = coords[:, None]
    dx = coords[None, :]
    if spec.kind == "circle":
        return np.sqrt(dy * dy + dx * dx)
    if spec.kind == "square":
        return np.maximum(np.abs(dy), np.abs(dx))
    return np.abs(dy) + np.abs(dx)


def render(spec: PatternSpec) -> np.ndarray:
    """Rasterize ``spec`` to a (canvas, canvas, 3) float64 image in [0, 255].

    Rings are painted innermost first, so where adjacent bands overlap the
    outer ring wins. The band is half-open, [r - w/2, r + w/2): under the L1
    norm the distance field is integer-valued, and a closed band would grab
    an extra lattice shell whenever a radius lands on an integer, making
    pixel counts non-monotone in density.
    """
    dist = _distance_field(spec)
    image = np.empty((spec.canvas, spec.canvas, 3), dtype=np.float64)
    image[:] = spec.background
    half = spec.stroke_width / 2.0
    for m, radius in enumerate(spec.radii(), start=1):
        band = (dist >= radius - half) & (dist < radius + half)
        image[band] = spec.palette[(m - 1) % len(spec.palette)]
    return image
