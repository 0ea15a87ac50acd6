import json

import numpy as np
import pytest
from PIL import Image

from freqmix import read_tensor, write_tensor
from freqmix.cli import load_config_file, main, resolve_settings, build_parser


def make_corpus(root, count=4, size=48, seed=0):
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    for i in range(count):
        pixels = rng.integers(0, 256, (size, size, 3), dtype=np.uint8)
        Image.fromarray(pixels, "RGB").save(root / f"img_{i:03d}.png")
    return sorted(root.iterdir())


def make_smooth_corpus(root, count=2, size=64, seed=0):
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    for i in range(count):
        coarse = rng.integers(30, 220, (4, 4, 3), dtype=np.uint8)
        img = Image.fromarray(coarse, "RGB").resize((size, size), Image.BILINEAR)
        img.save(root / f"smooth_{i}.png")
    return sorted(root.iterdir())


def tree_bytes(root):
    return {p.name: p.read_bytes() for p in sorted(root.iterdir()) if p.is_file()}


ATTACK_FLAGS = ["--canvas", "128", "--intermediate", "96", "--tile-scheme", "3",
                "--density", "6", "--k", "2"]


def test_attack_then_check_roundtrip(tmp_path, capsys):
    inputs = tmp_path / "in"
    outputs = tmp_path / "out"
    make_corpus(inputs, count=10)
    code = main(["attack", str(inputs), str(outputs), "--epsilon", "16", *ATTACK_FLAGS])
    assert code == 0
    produced = sorted(p.name for p in outputs.iterdir())
    assert produced == [f"img_{i:03d}.png" for i in range(10)]
    with Image.open(outputs / "img_000.png") as img:
        assert img.size == (48, 48)  # output dimensions equal input dimensions
    assert main(["check", str(inputs), str(outputs), "--epsilon", "16"]) == 0
    out = capsys.readouterr().out
    assert "0 violations" in out


def test_check_flags_a_single_manual_violation(tmp_path, capsys):
    inputs = tmp_path / "in"
    outputs = tmp_path / "out"
    make_corpus(inputs, count=3)
    assert main(["attack", str(inputs), str(outputs), "--epsilon", "16", *ATTACK_FLAGS]) == 0

    victim = outputs / "img_001.png"
    original = np.asarray(Image.open(inputs / "img_001.png"), dtype=np.int16)
    tampered = np.asarray(Image.open(victim), dtype=np.int16).copy()
    tampered[5, 5, 0] = original[5, 5, 0] + 17 if original[5, 5, 0] <= 238 else original[5, 5, 0] - 17
    Image.fromarray(tampered.astype(np.uint8), "RGB").save(victim)

    assert main(["check", str(inputs), str(outputs), "--epsilon", "16"]) == 1
    out = capsys.readouterr().out
    assert "1 violations" in out
    assert "img_001" in out


def test_check_identical_dirs_at_zero_epsilon(tmp_path, capsys):
    inputs = tmp_path / "in"
    make_corpus(inputs, count=3)
    assert main(["check", str(inputs), str(inputs), "--epsilon", "0"]) == 0
    assert "0 violations" in capsys.readouterr().out


def test_check_reports_missing_counterparts(tmp_path, capsys):
    inputs = tmp_path / "in"
    outputs = tmp_path / "out"
    make_corpus(inputs, count=3)
    assert main(["attack", str(inputs), str(outputs), "--epsilon", "8", *ATTACK_FLAGS]) == 0
    (outputs / "img_002.png").unlink()
    assert main(["check", str(inputs), str(outputs), "--epsilon", "8"]) == 1
    assert "missing counterpart" in capsys.readouterr().out


def test_attack_runs_are_byte_identical(tmp_path):
    inputs = tmp_path / "in"
    make_corpus(inputs, count=5)
    first = tmp_path / "out1"
    second = tmp_path / "out2"
    for out in (first, second):
        assert main(["attack", str(inputs), str(out), "--epsilon", "16", *ATTACK_FLAGS]) == 0
    assert tree_bytes(first) == tree_bytes(second)


def test_thread_count_does_not_change_results(tmp_path):
    inputs = tmp_path / "in"
    make_corpus(inputs, count=6)
    trees = []
    for threads in ("1", "4", "0"):
        out = tmp_path / f"out_t{threads}"
        code = main(["attack", str(inputs), str(out), "--epsilon", "16",
                     "--threads", threads, *ATTACK_FLAGS])
        assert code == 0
        trees.append(tree_bytes(out))
    assert trees[0] == trees[1] == trees[2]


def test_empty_input_dir_fails_before_writing(tmp_path, capsys):
    inputs = tmp_path / "in"
    inputs.mkdir()
    outputs = tmp_path / "out"
    assert main(["attack", str(inputs), str(outputs), *ATTACK_FLAGS]) == 2
    assert not outputs.exists()
    assert "error" in capsys.readouterr().err


def test_invalid_config_fails_before_writing(tmp_path, capsys):
    inputs = tmp_path / "in"
    make_corpus(inputs, count=2)
    outputs = tmp_path / "out"
    assert main(["attack", str(inputs), str(outputs), "--epsilon", "300", *ATTACK_FLAGS]) == 2
    assert not outputs.exists()


def test_undecodable_file_is_recorded_and_run_continues(tmp_path, capsys):
    inputs = tmp_path / "in"
    make_corpus(inputs, count=3)
    (inputs / "broken.png").write_bytes(b"not a png at all")
    outputs = tmp_path / "out"
    code = main(["attack", str(inputs), str(outputs), "--epsilon", "16",
                 "--emit-report", *ATTACK_FLAGS])
    assert code == 1
    captured = capsys.readouterr()
    assert "failed 1" in captured.out
    assert "broken.png" in captured.err
    assert sorted(p.name for p in outputs.iterdir() if p.name.startswith("img")) == [
        "img_000.png", "img_001.png", "img_002.png"
    ]
    report = json.loads((outputs / "run_summary.json").read_text())
    assert report["processed"] == 3
    assert report["failed"] == 1
    assert report["failures"][0]["file"] == "broken.png"
    assert report["max_abs_delta"]["max"] <= 16.0


def test_attack_with_explicit_patch_file(tmp_path):
    inputs = tmp_path / "in"
    make_corpus(inputs, count=3)
    patch_path = tmp_path / "patch.png"
    rng = np.random.default_rng(9)
    Image.fromarray(rng.integers(0, 256, (64, 64, 3), dtype=np.uint8), "RGB").save(patch_path)
    outputs = tmp_path / "out"
    code = main(["attack", str(inputs), str(outputs), "--epsilon", "16",
                 "--patch-file", str(patch_path), "--emit-patch", "--k", "2"])
    assert code == 0
    assert (outputs / "_patch.png").exists()
    used = np.asarray(Image.open(outputs / "_patch.png"))
    assert used.shape == (48, 48, 3)  # resized to the corpus image size
    assert main(["check", str(inputs), str(outputs), "--epsilon", "16"]) == 0


def test_config_file_values_and_flag_precedence(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text(
        "# corpus defaults\n"
        "epsilon = 8\n"
        "lambda = 2.0\n"
        "pattern = square\n"
        "tile_scheme = 2\n"
    )
    values = load_config_file(config)
    assert values == {"epsilon": 8.0, "lambda": 2.0, "pattern": "square", "tile_scheme": 2}

    parser = build_parser()
    args = parser.parse_args(["attack", "in", "out", "--config", str(config),
                              "--epsilon", "4"])
    settings = resolve_settings(args)
    assert settings["epsilon"] == 4.0  # flag wins
    assert settings["lambda"] == 2.0  # file beats default
    assert settings["pattern"] == "square"
    assert settings["k"] == 4  # untouched default


def test_config_file_rejects_unknown_keys(tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("budget = 12\n")
    with pytest.raises(ValueError):
        load_config_file(config)


def test_patch_subcommand_writes_deterministic_pngs(tmp_path):
    out1 = tmp_path / "p1"
    out2 = tmp_path / "p2"
    argv = ["patch", "--pattern", "rhombus", "--density", "6", "--tile-scheme", "3",
            "--target-size", "96"]
    assert main([argv[0], str(out1), *argv[1:]]) == 0
    assert main([argv[0], str(out2), *argv[1:]]) == 0
    assert sorted(p.name for p in out1.iterdir()) == [
        "patch_rhombus_d6_n3.png", "proto_rhombus_d6.png"
    ]
    assert tree_bytes(out1) == tree_bytes(out2)


@pytest.mark.parametrize("mode,extra", [("random", []), ("semi-random", ["--axis", "w"])])
def test_noise_subcommand_respects_the_budget(tmp_path, mode, extra):
    inputs = tmp_path / "in"
    make_corpus(inputs, count=3)
    outputs = tmp_path / f"out_{mode}"
    code = main(["noise", str(inputs), str(outputs), "--mode", mode,
                 "--fraction", "0.5", "--epsilon", "16", *extra])
    assert code == 0
    assert main(["check", str(inputs), str(outputs), "--epsilon", "16"]) == 0


def test_noise_subcommand_is_deterministic(tmp_path):
    inputs = tmp_path / "in"
    make_corpus(inputs, count=2)
    out1 = tmp_path / "n1"
    out2 = tmp_path / "n2"
    for out in (out1, out2):
        assert main(["noise", str(inputs), str(out), "--mode", "semi-random",
                     "--fraction", "0.4", "--epsilon", "8", "--seed", "3"]) == 0
    assert tree_bytes(out1) == tree_bytes(out2)


def test_decompose_subcommand_round_trips(tmp_path):
    inputs = tmp_path / "in"
    make_smooth_corpus(inputs, count=2)
    lfc_dir = tmp_path / "lfc"
    hfc_dir = tmp_path / "hfc"
    assert main(["decompose", str(inputs), str(lfc_dir), str(hfc_dir), "--k", "4"]) == 0

    metadata = json.loads((hfc_dir / "metadata.json").read_text())
    assert metadata == {"hfc_offset": 128.0, "k": 4}
    for path in inputs.iterdir():
        original = np.asarray(Image.open(path), dtype=np.float64)
        lfc = np.asarray(Image.open(lfc_dir / path.name), dtype=np.float64)
        hfc = np.asarray(Image.open(hfc_dir / path.name), dtype=np.float64)
        rebuilt = lfc + hfc - metadata["hfc_offset"]
        assert np.abs(rebuilt - original).max() <= 1.0  # two quantizations


def test_analyze_subcommand_reports_each_feature_map(tmp_path, capsys):
    image_path = tmp_path / "img.png"
    pixels = np.full((32, 32, 3), 128, dtype=np.uint8)
    # 2 px block checkerboard: coarse enough to survive the 2x downscale.
    rows, cols = np.indices((32, 16))
    blocks = (((rows // 2 + cols // 2) % 2) * 255).astype(np.uint8)
    pixels[:, 16:, :] = blocks[:, :, None]
    Image.fromarray(pixels, "RGB").save(image_path)

    features = np.zeros((2, 16, 16), dtype=np.float32)
    features[0, :, 8:] = 1.0  # responds where the texture is
    features[1, :, :8] = 1.0  # responds to the flat side
    feat_path = tmp_path / "feat.bin"
    write_tensor(feat_path, features)

    report_path = tmp_path / "report.tsv"
    code = main(["analyze", str(image_path), str(feat_path),
                 "--k", "2", "--tau", "20", "--out", str(report_path)])
    assert code == 0
    lines = report_path.read_text().strip().splitlines()
    assert lines[0].startswith("# feature_map")
    records = [line.split("\t") for line in lines[1:]]
    assert len(records) == 2
    assert records[0][3] == "1"  # texture-aligned map is high-frequency dominant
    assert records[1][3] == "0"

    # The mask-shrinking registration path also runs end to end.
    assert main(["analyze", str(image_path), str(feat_path), "--k", "2",
                 "--registration", "mask"]) == 0
    assert capsys.readouterr().out.count("\n") >= 3


def test_analyze_accepts_rank_two_tensors(tmp_path):
    image_path = tmp_path / "img.png"
    Image.fromarray(np.zeros((16, 16, 3), dtype=np.uint8), "RGB").save(image_path)
    feat_path = tmp_path / "feat.bin"
    write_tensor(feat_path, np.ones((8, 8), dtype=np.float32))
    # All-zero image has an empty high mask: degenerate, reported as error.
    assert main(["analyze", str(image_path), str(feat_path), "--k", "2"]) == 2


def test_tensor_written_by_harness_layout_reads_back(tmp_path):
    # Interface sanity for external producers writing the documented layout.
    import struct

    path = tmp_path / "external.bin"
    payload = np.arange(12, dtype="<f4")
    path.write_bytes(struct.pack("<3I", 2, 3, 4) + payload.tobytes())
    tensor = read_tensor(path)
    assert tensor.shape == (3, 4)
    assert np.array_equal(tensor.ravel(), payload)
