import numpy as np
import pytest

from evalharness import (
    EvalSpec,
    format_table,
    midlayer_cosine,
    paired_files,
    read_tensor,
    success_rate,
    write_tensor,
)

MODELS = ("test:tiny-a", "test:tiny-b")


def test_identical_directories_give_zero_success(clean_dir, identical_adv_dir):
    results = success_rate(EvalSpec(MODELS, clean_dir, identical_adv_dir, batch_size=4))
    assert [r.model_id for r in results] == list(MODELS)
    for r in results:
        assert r.pairs == 6
        assert r.rate == 0.0


def test_success_rate_is_bounded_and_pairwise(clean_dir, perturbed_adv_dir):
    results = success_rate(EvalSpec(MODELS, clean_dir, perturbed_adv_dir, batch_size=4))
    for r in results:
        assert 0.0 <= r.rate <= 100.0
        assert r.pairs == 6


def test_unpaired_files_are_excluded_and_reported(clean_dir, identical_adv_dir):
    (identical_adv_dir / "img_003.png").unlink()
    pairs, missing = paired_files(clean_dir, identical_adv_dir)
    assert len(pairs) == 5
    assert missing == ["img_003"]
    results = success_rate(EvalSpec(MODELS[:1], clean_dir, identical_adv_dir))
    assert results[0].pairs == 5
    assert results[0].missing == ["img_003"]


def test_success_rate_with_defense_reports_agreement(clean_dir, identical_adv_dir):
    spec = EvalSpec(MODELS[:1], clean_dir, identical_adv_dir, defense="jpeg75")
    result = success_rate(spec)[0]
    assert 0.0 <= result.rate <= 100.0
    assert 0.0 <= result.clean_defense_agreement <= 100.0


def test_success_rate_requires_adv_dir(clean_dir):
    with pytest.raises(ValueError):
        success_rate(EvalSpec(MODELS, clean_dir))


def test_cosine_of_identical_pairs_is_one(clean_dir, identical_adv_dir):
    results = midlayer_cosine(EvalSpec(MODELS, clean_dir, identical_adv_dir, batch_size=3))
    for r in results:
        assert r.pairs == 6
        assert r.mean_cosine == pytest.approx(1.0, abs=1e-6)


def test_cosine_drops_for_perturbed_pairs(clean_dir, perturbed_adv_dir):
    same = midlayer_cosine(EvalSpec(MODELS[:1], clean_dir, clean_dir))[0]
    moved = midlayer_cosine(EvalSpec(MODELS[:1], clean_dir, perturbed_adv_dir))[0]
    assert moved.mean_cosine < same.mean_cosine


def test_tensor_container_round_trip(tmp_path):
    path = tmp_path / "t.bin"
    tensor = np.random.default_rng(0).normal(size=(4, 5, 6)).astype(np.float32)
    write_tensor(path, tensor)
    assert np.array_equal(read_tensor(path), tensor)


def test_format_table_alignment():
    text = format_table(["model", "rate"], [["tiny", "98.10"], ["wide-name", "3.00"]])
    lines = text.splitlines()
    assert lines[0].startswith("model")
    assert set(lines[1]) <= {"-", " "}
    assert len(lines) == 4


def test_batch_size_validation(clean_dir):
    with pytest.raises(ValueError):
        EvalSpec(MODELS, clean_dir, batch_size=0)
