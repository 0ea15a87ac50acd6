"""Classifier-side measurements: attack success, frequency accuracy,
mid-layer feature similarity, and frequency-dominance counts.

Rates follow the convention of pre-filtered corpora: the clean top-1
prediction stands in for the ground-truth label, which is exact whenever the
corpus only contains images the model classifies correctly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from .data import load_image, model_input, paired_files, to_batch, list_images
from .defenses import apply_defense
from .models import extract_features, load_model, predict, resolve_layer
from .primarycli import analyze_features, decompose_corpus, parse_report
from .tensorfile import write_tensor

__all__ = [
    "EvalSpec",
    "ModelRate",
    "ModelCosine",
    "FrequencyRow",
    "DominanceRatio",
    "success_rate",
    "midlayer_cosine",
    "frequency_accuracy",
    "dominance_ratio",
    "export_features",
    "format_table",
]


@dataclass
class EvalSpec:
    """Shared evaluation parameters.

    ``defense`` (one of jpeg75 / gauss5 / gauss17) is applied to the
    adversarial inputs before classification; ``layer`` feeds the feature
    metrics ("midpoint" = depth/2 rule, "shallow", or an explicit module
    name).
    """

    model_ids: tuple[str, ...]
    clean_dir: Path
    adv_dir: Path | None = None
    batch_size: int = 16
    defense: str | None = None
    layer: str = "midpoint"
    normalize: bool = True

    def __post_init__(self):
        self.model_ids = tuple(self.model_ids)
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class ModelRate:
    model_id: str
    pairs: int
    rate: float  # percent of pairs whose adversarial prediction flipped
    clean_defense_agreement: float | None = None
    missing: list[str] = field(default_factory=list)


@dataclass
class ModelCosine:
    model_id: str
    pairs: int
    mean_cosine: float


@dataclass
class FrequencyRow:
    k: int
    model_id: str
    lfc_accuracy: float
    hfc_accuracy: float


@dataclass
class DominanceRatio:
    model_id: str
    feature_maps: int
    hfc_dominant: int
    lfc_dominant: int

    @property
    def ratio(self) -> float:
        if self.lfc_dominant == 0:
            return float("inf")
        return self.hfc_dominant / self.lfc_dominant


def _batched(items, size):
    for start in range(0, len(items), size):
        yield items[start : start + size]


def success_rate(spec: EvalSpec) -> list[ModelRate]:
    """Percent of paired images whose prediction flips on the adversarial copy."""
    if spec.adv_dir is None:
        raise ValueError("success_rate needs adv_dir")
    pairs, missing = paired_files(spec.clean_dir, spec.adv_dir)
    if not pairs:
        raise ValueError("no matched clean/adversarial pairs")
    results = []
    for model_id in spec.model_ids:
        model = load_model(model_id)
        flipped = 0
        defended_agree = 0
        for chunk in _batched(pairs, spec.batch_size):
            clean = to_batch([load_image(c) for c, _ in chunk])
            labels = predict(model, model_input(clean, spec.normalize))
            adv_arrays = [load_image(a) for _, a in chunk]
            if spec.defense is not None:
                adv_arrays = [apply_defense(a, spec.defense) for a in adv_arrays]
            adv_pred = predict(model, model_input(to_batch(adv_arrays), spec.normalize))
            flipped += int((adv_pred != labels).sum())
            if spec.defense is not None:
                defended_clean = [apply_defense(load_image(c), spec.defense)
                                  for c, _ in chunk]
                defended_pred = predict(
                    model, model_input(to_batch(defended_clean), spec.normalize)
                )
                defended_agree += int((defended_pred == labels).sum())
        results.append(
            ModelRate(
                model_id=model_id,
                pairs=len(pairs),
                rate=100.0 * flipped / len(pairs),
                clean_defense_agreement=(
                    100.0 * defended_agree / len(pairs) if spec.defense else None
                ),
                missing=missing,
            )
        )
    return results


def midlayer_cosine(spec: EvalSpec) -> list[ModelCosine]:
    """Mean cosine similarity between clean and adversarial features."""
    if spec.adv_dir is None:
        raise ValueError("midlayer_cosine needs adv_dir")
    pairs, _ = paired_files(spec.clean_dir, spec.adv_dir)
    if not pairs:
        raise ValueError("no matched clean/adversarial pairs")
    results = []
    for model_id in spec.model_ids:
        model = load_model(model_id)
        layer = resolve_layer(model, spec.layer)
        cosines = []
        for chunk in _batched(pairs, spec.batch_size):
            clean = model_input(to_batch([load_image(c) for c, _ in chunk]), spec.normalize)
            adv = model_input(to_batch([load_image(a) for _, a in chunk]), spec.normalize)
            feats_clean = extract_features(model, clean, layer).flatten(start_dim=1)
            feats_adv = extract_features(model, adv, layer).flatten(start_dim=1)
            sims = torch.nn.functional.cosine_similarity(feats_clean, feats_adv, dim=1)
            cosines.extend(sims.tolist())
        results.append(ModelCosine(model_id=model_id, pairs=len(pairs),
                                   mean_cosine=float(np.mean(cosines))))
    return results


def frequency_accuracy(spec: EvalSpec, k_list, work_dir) -> list[FrequencyRow]:
    """Accuracy on low- and high-frequency components per kernel width.

    Components are produced by the generator CLI's ``decompose`` (the
    exported high-frequency images carry its documented display offset);
    accuracy is measured against the clean top-1 predictions.
    """
    work = Path(work_dir)
    rows = []
    models = {mid: load_model(mid) for mid in spec.model_ids}
    clean_files = list_images(spec.clean_dir)
    if not clean_files:
        raise ValueError(f"no decodable images under {spec.clean_dir}")

    labels: dict[str, torch.Tensor] = {}
    for model_id, model in models.items():
        parts = []
        for chunk in _batched(clean_files, spec.batch_size):
            batch = model_input(to_batch([load_image(p) for p in chunk]), spec.normalize)
            parts.append(predict(model, batch))
        labels[model_id] = torch.cat(parts)

    for k in k_list:
        lfc_dir = work / f"k{k}" / "lfc"
        hfc_dir = work / f"k{k}" / "hfc"
        decompose_corpus(spec.clean_dir, lfc_dir, hfc_dir, k)
        for model_id, model in models.items():
            accuracies = {}
            for name, directory in (("lfc", lfc_dir), ("hfc", hfc_dir)):
                files = [directory / (p.stem + ".png") for p in clean_files]
                parts = []
                for chunk in _batched(files, spec.batch_size):
                    batch = model_input(to_batch([load_image(p) for p in chunk]),
                                        spec.normalize)
                    parts.append(predict(model, batch))
                preds = torch.cat(parts)
                accuracies[name] = 100.0 * float((preds == labels[model_id]).float().mean())
            rows.append(FrequencyRow(k=k, model_id=model_id,
                                     lfc_accuracy=accuracies["lfc"],
                                     hfc_accuracy=accuracies["hfc"]))
    return rows


def export_features(model_id: str, image_path, out_path, layer: str = "shallow",
                    normalize: bool = True) -> tuple[int, int, int]:
    """Write one image's feature maps at ``layer`` to the tensor container."""
    model = load_model(model_id)
    module = resolve_layer(model, layer)
    batch = model_input(to_batch([load_image(image_path)]), normalize)
    features = extract_features(model, batch, module)[0]
    if features.ndim != 3:
        raise ValueError(f"layer {layer!r} yields rank-{features.ndim} features; "
                         "expected (C, H, W)")
    write_tensor(out_path, features.cpu().numpy())
    return tuple(features.shape)


def dominance_ratio(model_id: str, image_path, work_dir, k: int = 4,
                    tau: float = 20.0, layer: str = "shallow",
                    normalize: bool = True) -> DominanceRatio:
    """Count feature maps responding more to high- than low-frequency regions.

    Features are exported to the tensor container and classified by the
    generator CLI's ``analyze`` report.
    """
    work = Path(work_dir)
    work.mkdir(parents=True, exist_ok=True)
    features_path = work / "features.bin"
    report_path = work / "dominance.tsv"
    export_features(model_id, image_path, features_path, layer=layer,
                    normalize=normalize)
    analyze_features(image_path, features_path, report_path, k=k, tau=tau)
    records = parse_report(report_path)
    high = sum(1 for r in records if r.hfc_dominant)
    return DominanceRatio(model_id=model_id, feature_maps=len(records),
                          hfc_dominant=high, lfc_dominant=len(records) - high)


def format_table(headers, rows) -> str:
    """Fixed-width text table, one line per row."""
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for idx, row in enumerate(cells):
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"
