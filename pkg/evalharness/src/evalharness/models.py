"""Classifier loading, layer resolution, and feature extraction.

Models are addressed by string id: ``torchvision:<name>`` loads a pretrained
torchvision classifier, and ids registered through ``register_model`` (used
by tests and custom setups) take precedence. Everything runs on CPU in eval
mode.
"""

from __future__ import annotations

from typing import Callable

import torch
from torch import nn
import torchvision.models as tv_models

__all__ = [
    "register_model",
    "load_model",
    "pretrained_available",
    "leaf_modules",
    "resolve_layer",
    "extract_features",
    "predict",
]

_REGISTRY: dict[str, Callable[[], nn.Module]] = {}

_ACTIVATIONS = (nn.ReLU, nn.ReLU6, nn.SiLU, nn.GELU, nn.Hardswish, nn.LeakyReLU)


def register_model(model_id: str, factory: Callable[[], nn.Module]) -> None:
    """Register a model factory under an id; factories must be deterministic."""
    _REGISTRY[model_id] = factory


def load_model(model_id: str) -> nn.Module:
    """Instantiate the model for ``model_id`` on CPU in eval mode."""
    if model_id in _REGISTRY:
        model = _REGISTRY[model_id]()
    elif model_id.startswith("torchvision:"):
        name = model_id.split(":", 1)[1]
        model = tv_models.get_model(name, weights="DEFAULT")
    else:
        raise ValueError(
            f"unknown model id {model_id!r}; use 'torchvision:<name>' or register it"
        )
    model.eval()
    return model


def pretrained_available(model_id: str) -> bool:
    """Whether ``model_id`` can actually be instantiated here.

    Pretrained torchvision weights need either a local cache or network
    access, so this probes by loading.
    """
    try:
        load_model(model_id)
        return True
    except Exception:
        return False


def leaf_modules(model: nn.Module) -> list[tuple[str, nn.Module]]:
    """Named modules without children, in forward-definition order."""
    return [(name, mod) for name, mod in model.named_modules()
            if not any(mod.children())]


def resolve_layer(model: nn.Module, selector: str) -> nn.Module:
    """Map a layer selector to a module.

    ``"midpoint"`` picks the middle entry of the flattened layer list (the
    depth/2 rule), ``"shallow"`` picks the first activation after the stem,
    and anything else is looked up as a dotted module name.
    """
    leaves = leaf_modules(model)
    if selector == "midpoint":
        return leaves[len(leaves) // 2][1]
    if selector == "shallow":
        for _, mod in leaves:
            if isinstance(mod, _ACTIVATIONS):
                return mod
        return leaves[min(2, len(leaves) - 1)][1]
    named = dict(model.named_modules())
    if selector not in named:
        raise ValueError(f"model has no layer named {selector!r}")
    return named[selector]


def extract_features(model: nn.Module, inputs: torch.Tensor,
                     layer: nn.Module) -> torch.Tensor:
    """Forward ``inputs`` and capture the output of ``layer``."""
    captured: dict[str, torch.Tensor] = {}

    def hook(_module, _inputs, output):
        captured["value"] = output.detach()

    handle = layer.register_forward_hook(hook)
    try:
        with torch.no_grad():
            model(inputs)
    finally:
        handle.remove()
    if "value" not in captured:
        raise RuntimeError("selected layer was never reached during forward")
    return captured["value"]


def predict(model: nn.Module, inputs: torch.Tensor) -> torch.Tensor:
    """Top-1 class indices for a batch."""
    with torch.no_grad():
        logits = model(inputs)
    return logits.argmax(dim=1)
