import numpy as np
import pytest
import torch
from PIL import Image
from torch import nn

from evalharness import register_model

from corpus_utils import write_corpus


def _tiny_classifier(seed: int) -> nn.Module:
    torch.manual_seed(seed)
    model = nn.Sequential(
        nn.Conv2d(3, 8, 3, padding=1),
        nn.ReLU(),
        nn.MaxPool2d(2),
        nn.Conv2d(8, 16, 3, padding=1),
        nn.ReLU(),
        nn.AdaptiveAvgPool2d(1),
        nn.Flatten(),
        nn.Linear(16, 10),
    )
    model.eval()
    return model


register_model("test:tiny-a", lambda: _tiny_classifier(1))
register_model("test:tiny-b", lambda: _tiny_classifier(2))


@pytest.fixture
def clean_dir(tmp_path):
    return write_corpus(tmp_path / "clean", count=6)


@pytest.fixture
def identical_adv_dir(tmp_path, clean_dir):
    adv = tmp_path / "adv_same"
    adv.mkdir()
    for path in clean_dir.iterdir():
        (adv / path.name).write_bytes(path.read_bytes())
    return adv


@pytest.fixture
def perturbed_adv_dir(tmp_path, clean_dir):
    adv = tmp_path / "adv_noise"
    adv.mkdir()
    rng = np.random.default_rng(99)
    for path in sorted(clean_dir.iterdir()):
        pixels = np.asarray(Image.open(path), dtype=np.int16)
        noise = rng.integers(-64, 65, pixels.shape)
        Image.fromarray(np.clip(pixels + noise, 0, 255).astype(np.uint8), "RGB").save(
            adv / path.name
        )
    return adv
