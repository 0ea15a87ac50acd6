"""Cross-package flows through the generator's CLI and file formats."""

import subprocess

import pytest

from evalharness import (
    EvalSpec,
    dominance_ratio,
    frequency_accuracy,
    parse_report,
    primary_executable,
    success_rate,
)
from evalharness.cli import main

from corpus_utils import write_corpus

pytestmark = pytest.mark.skipif(
    primary_executable() is None, reason="freqmix CLI is not installed"
)

MODELS = ("test:tiny-a", "test:tiny-b")


def attack_corpus(clean_dir, out_dir, *flags):
    subprocess.run(
        [primary_executable(), "attack", str(clean_dir), str(out_dir),
         "--epsilon", "16", *flags],
        check=True,
        capture_output=True,
    )
    return out_dir


def test_success_rate_on_generated_adversarial_corpus(tmp_path, clean_dir):
    adv = attack_corpus(clean_dir, tmp_path / "adv")
    results = success_rate(EvalSpec(MODELS, clean_dir, adv, batch_size=4))
    for r in results:
        assert r.pairs == 6
        assert 0.0 <= r.rate <= 100.0


def test_frequency_accuracy_table(tmp_path):
    clean = write_corpus(tmp_path / "clean", count=4, size=64)
    rows = frequency_accuracy(
        EvalSpec(MODELS[:1], clean, batch_size=4), k_list=[1, 2], work_dir=tmp_path / "work"
    )
    assert [(r.k, r.model_id) for r in rows] == [(1, MODELS[0]), (2, MODELS[0])]
    for r in rows:
        assert 0.0 <= r.lfc_accuracy <= 100.0
        assert 0.0 <= r.hfc_accuracy <= 100.0
    # k=1 keeps most content: the low-frequency component stays closest to
    # the clean predictions it is scored against.
    assert rows[0].lfc_accuracy >= rows[1].lfc_accuracy
    assert (tmp_path / "work" / "k1" / "hfc" / "metadata.json").exists()


def test_dominance_ratio_via_analyze_report(tmp_path):
    clean = write_corpus(tmp_path / "clean", count=1, size=64, smooth=False)
    image = next(clean.iterdir())
    result = dominance_ratio("test:tiny-a", image, tmp_path / "work", k=2, tau=10.0)
    assert result.feature_maps == 8  # channels of the shallow activation
    assert result.hfc_dominant + result.lfc_dominant == result.feature_maps
    records = parse_report(tmp_path / "work" / "dominance.tsv")
    assert len(records) == 8
    assert all(r.a_high >= 0.0 and r.a_low >= 0.0 for r in records)


def test_cli_tables(tmp_path, capsys):
    clean = write_corpus(tmp_path / "clean", count=3, size=64)
    adv = attack_corpus(clean, tmp_path / "adv")
    code = main(["success-rate", "--models", ",".join(MODELS),
                 "--clean", str(clean), "--adv", str(adv), "--batch-size", "2"])
    assert code == 0
    out = capsys.readouterr().out
    assert "success_rate_%" in out
    assert out.count("test:tiny") == 2

    code = main(["cosine", "--models", MODELS[0], "--clean", str(clean),
                 "--adv", str(adv)])
    assert code == 0
    assert "mean_cosine" in capsys.readouterr().out

    image = next(clean.iterdir())
    code = main(["dominance", "--model", MODELS[0], "--image", str(image),
                 "--work", str(tmp_path / "dom"), "--k", "2", "--tau", "10"])
    assert code == 0
    assert "hfc_dominant" in capsys.readouterr().out

    out_file = tmp_path / "features.bin"
    code = main(["export-features", "--model", MODELS[0], "--image", str(image),
                 "--out", str(out_file)])
    assert code == 0
    assert out_file.exists()


def test_cli_reports_errors_cleanly(tmp_path, capsys):
    code = main(["success-rate", "--models", "test:tiny-a",
                 "--clean", str(tmp_path / "nope"), "--adv", str(tmp_path / "nope")])
    assert code == 2
    assert "error" in capsys.readouterr().err
