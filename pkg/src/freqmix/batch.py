"""Corpus-scale drivers behind the command-line interface."""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .attack import AttackConfig, build_patch, hybrid_attack
from .imgio import list_images, load_image, quantize_within_ball, save_png
from .tiling import resize_bilinear

__all__ = ["RunManifest", "BatchSummary", "CheckReport", "run_batch", "check_corpus"]


@dataclass
class RunManifest:
    """Everything one batch run needs, including the full attack config."""

    input_dir: Path
    output_dir: Path
    attack: AttackConfig
    patch_file: Path | None = None
    emit_patch: bool = False
    emit_report: bool = False
    threads: int = 0


@dataclass
class BatchSummary:
    processed: int
    failed: int
    wall_seconds: float
    delta_min: float
    delta_mean: float
    delta_max: float
    failures: list[tuple[str, str]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "processed": self.processed,
            "failed": self.failed,
            "wall_seconds": self.wall_seconds,
            "max_abs_delta": {
                "min": self.delta_min,
                "mean": self.delta_mean,
                "max": self.delta_max,
            },
            "failures": [{"file": f, "error": e} for f, e in self.failures],
        }


class _PatchCache:
    """One patch per target size, shared read-only across worker threads."""

    def __init__(self, attack: AttackConfig, patch_file: Path | None):
        self._attack = attack
        self._source = load_image(patch_file) if patch_file is not None else None
        self._cache: dict[tuple[int, int], np.ndarray] = {}
        self._lock = threading.Lock()

    def get(self, height: int, width: int) -> np.ndarray:
        key = (height, width)
        with self._lock:
            patch = self._cache.get(key)
            if patch is None:
                if self._source is not None:
                    patch = (
                        self._source
                        if self._source.shape[:2] == key
                        else resize_bilinear(self._source, height, width)
                    )
                else:
                    tile = replace(self._attack.tile, target_h=height, target_w=width)
                    patch = build_patch(self._attack.pattern, tile)
                self._cache[key] = patch
            return patch


def run_batch(manifest: RunManifest) -> BatchSummary:
    """Attack every decodable image under ``manifest.input_dir``.

    Outputs are PNGs named after the input stems. Per-image decode failures
    are recorded and the run continues; invalid configuration fails before
    anything is written.
    """
    input_dir = Path(manifest.input_dir)
    if not input_dir.is_dir():
        raise ValueError(f"input directory {input_dir} does not exist")
    files = list_images(input_dir)
    if not files:
        raise ValueError(f"no decodable images under {input_dir}")

    output_dir = Path(manifest.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    patches = _PatchCache(manifest.attack, manifest.patch_file)
    started = time.perf_counter()

    def process(path: Path) -> float:
        original = load_image(path)
        patch = patches.get(original.shape[0], original.shape[1])
        adversarial = hybrid_attack(original, patch, manifest.attack)
        encoded = quantize_within_ball(adversarial, original, manifest.attack.epsilon)
        save_png(output_dir / (path.stem + ".png"), encoded)
        return float(np.abs(encoded.astype(np.float64) - original).max())

    deltas: list[float] = []
    failures: list[tuple[str, str]] = []
    workers = manifest.threads if manifest.threads > 0 else None
    if manifest.threads == 1:
        results = [(path, _attempt(process, path)) for path in files]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda p: _attempt(process, p), files))
        results = list(zip(files, outcomes))
    for path, (delta, error) in results:
        if error is None:
            deltas.append(delta)
        else:
            failures.append((path.name, error))

    if manifest.emit_patch:
        # Patch at the size of the first decodable image, for inspection.
        for path in files:
            try:
                first = load_image(path)
            except Exception:
                continue
            save_png(output_dir / "_patch.png",
                     patches.get(first.shape[0], first.shape[1]))
            break

    wall = time.perf_counter() - started
    arr = np.asarray(deltas, dtype=np.float64)
    return BatchSummary(
        processed=len(deltas),
        failed=len(failures),
        wall_seconds=wall,
        delta_min=float(arr.min()) if arr.size else float("nan"),
        delta_mean=float(arr.mean()) if arr.size else float("nan"),
        delta_max=float(arr.max()) if arr.size else float("nan"),
        failures=failures,
    )


def _attempt(fn, path):
    try:
        return fn(path), None
    except Exception as exc:  # per-image isolation: record and continue
        return float("nan"), f"{type(exc).__name__}: {exc}"


@dataclass
class CheckReport:
    checked: int
    violations: list[str] = field(default_factory=list)
    missing: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.missing


def check_corpus(original_dir, adversarial_dir, epsilon: float) -> CheckReport:
    """Verify the epsilon-ball between matched files of two directories.

    Files are paired by stem. Shape mismatches and per-pixel deviations
    above ``epsilon`` are violations; unmatched originals are reported as
    missing.
    """
    originals = list_images(original_dir)
    if not originals:
        raise ValueError(f"no decodable images under {original_dir}")
    adv_by_stem = {p.stem: p for p in list_images(adversarial_dir)}

    report = CheckReport(checked=0)
    for path in originals:
        counterpart = adv_by_stem.get(path.stem)
        if counterpart is None:
            report.missing.append(path.name)
            continue
        original = load_image(path)
        adversarial = load_image(counterpart)
        report.checked += 1
        if original.shape != adversarial.shape:
            report.violations.append(
                f"{path.name}: shape {adversarial.shape} != {original.shape}"
            )
            continue
        delta = float(np.abs(adversarial - original).max())
        if delta > epsilon:
            report.violations.append(
                f"{path.name}: max|delta| = {delta:g} exceeds epsilon = {epsilon:g}"
            )
    return report
