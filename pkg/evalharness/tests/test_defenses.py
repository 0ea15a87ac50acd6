import numpy as np
import pytest
from PIL import Image

from evalharness import apply_defense, gaussian_blur, jpeg_roundtrip


def natural_ish(size=64, seed=0):
    rng = np.random.default_rng(seed)
    coarse = rng.integers(0, 256, (8, 8, 3), dtype=np.uint8)
    img = Image.fromarray(coarse, "RGB").resize((size, size), Image.BILINEAR)
    return np.asarray(img, dtype=np.float32)


def test_gaussian_blur_preserves_constants():
    img = np.full((32, 32, 3), 200.0, dtype=np.float32)
    out = apply_defense(img, "gauss17")
    assert np.abs(out - 200.0).max() <= 1e-4


def test_gaussian_blur_smooths_texture():
    rng = np.random.default_rng(1)
    img = rng.uniform(0, 255, (32, 32, 3)).astype(np.float32)
    out = gaussian_blur(img, k=4)
    assert out.std() < img.std()
    assert out.shape == img.shape


def test_gaussian_blur_rejects_bad_width():
    with pytest.raises(ValueError):
        gaussian_blur(np.zeros((8, 8, 3)), k=0)


def test_jpeg_roundtrip_shape_and_range():
    img = natural_ish()
    out = jpeg_roundtrip(img, quality=75)
    assert out.shape == img.shape
    assert out.min() >= 0 and out.max() <= 255


def test_jpeg_is_lossy_and_not_idempotent():
    img = natural_ish(seed=3)
    once = jpeg_roundtrip(img, quality=75)
    twice = jpeg_roundtrip(once, quality=75)
    assert np.abs(once - img).max() > 0  # lossy
    assert np.abs(twice - once).max() > 0  # re-encoding keeps changing pixels


def test_unknown_defense_rejected():
    with pytest.raises(ValueError):
        apply_defense(np.zeros((8, 8, 3)), "median")


def test_defend_subcommand_writes_a_directory(tmp_path, capsys):
    from evalharness.cli import main

    inputs = tmp_path / "in"
    inputs.mkdir()
    for i in range(2):
        Image.fromarray(natural_ish(seed=i).astype(np.uint8), "RGB").save(
            inputs / f"img_{i}.png"
        )
    outputs = tmp_path / "out"
    assert main(["defend", str(inputs), str(outputs), "--defense", "gauss5"]) == 0
    assert sorted(p.name for p in outputs.iterdir()) == ["img_0.png", "img_1.png"]
    original = np.asarray(Image.open(inputs / "img_0.png"), dtype=np.float32)
    defended = np.asarray(Image.open(outputs / "img_0.png"), dtype=np.float32)
    assert defended.shape == original.shape
    assert np.abs(defended - original).max() > 0  # blur moved pixels
