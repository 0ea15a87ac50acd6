"""Classifier-side evaluation harness for frequency-swap adversarial images.

Measures what needs real models: attack success rates, accuracy of low/high
frequency components, mid-layer feature similarity, dominance counts, and
input-preprocessing defenses. The adversarial images themselves come from
the generator package, consumed strictly through its CLI and file formats.
"""

from .data import IMAGENET_MEAN, IMAGENET_STD, load_image, model_input, paired_files, to_batch
from .defenses import DEFENSES, apply_defense, gaussian_blur, jpeg_roundtrip
from .metrics import (
    DominanceRatio,
    EvalSpec,
    FrequencyRow,
    ModelCosine,
    ModelRate,
    dominance_ratio,
    export_features,
    format_table,
    frequency_accuracy,
    midlayer_cosine,
    success_rate,
)
from .models import (
    extract_features,
    leaf_modules,
    load_model,
    predict,
    pretrained_available,
    register_model,
    resolve_layer,
)
from .primarycli import parse_report, primary_executable, run_primary
from .tensorfile import read_tensor, write_tensor

__version__ = "0.1.0"

__all__ = [
    "DEFENSES",
    "DominanceRatio",
    "EvalSpec",
    "FrequencyRow",
    "IMAGENET_MEAN",
    "IMAGENET_STD",
    "ModelCosine",
    "ModelRate",
    "apply_defense",
    "dominance_ratio",
    "export_features",
    "extract_features",
    "format_table",
    "frequency_accuracy",
    "gaussian_blur",
    "jpeg_roundtrip",
    "leaf_modules",
    "load_image",
    "load_model",
    "midlayer_cosine",
    "model_input",
    "paired_files",
    "parse_report",
    "predict",
    "pretrained_available",
    "primary_executable",
    "read_tensor",
    "register_model",
    "resolve_layer",
    "run_primary",
    "success_rate",
    "to_batch",
    "write_tensor",
]
