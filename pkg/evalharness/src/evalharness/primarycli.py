"""Subprocess bridge to the generator's command-line interface.

The harness never imports the generator package; it drives the ``freqmix``
executable and exchanges files in the documented formats.
"""

from __future__ import annotations

import shutil
import subprocess
from dataclasses import dataclass
from pathlib import Path

__all__ = [
    "primary_executable",
    "run_primary",
    "decompose_corpus",
    "analyze_features",
    "parse_report",
    "ReportRecord",
]


def primary_executable() -> str | None:
    return shutil.which("freqmix")


def run_primary(*args: str) -> str:
    exe = primary_executable()
    if exe is None:
        raise RuntimeError("the 'freqmix' executable is not on PATH")
    proc = subprocess.run([exe, *args], capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(
            f"freqmix {' '.join(args)} failed ({proc.returncode}): {proc.stderr.strip()}"
        )
    return proc.stdout


def decompose_corpus(input_dir, lfc_dir, hfc_dir, k: int) -> None:
    run_primary("decompose", str(input_dir), str(lfc_dir), str(hfc_dir), "--k", str(k))


def analyze_features(image, features, out, k: int = 4, tau: float = 20.0,
                     registration: str = "image") -> None:
    run_primary("analyze", str(image), str(features), "--k", str(k),
                "--tau", str(tau), "--registration", registration,
                "--out", str(out))


@dataclass(frozen=True)
class ReportRecord:
    index: int
    a_high: float
    a_low: float
    hfc_dominant: bool


def parse_report(path) -> list[ReportRecord]:
    """Parse the dominance report: tab-separated, '#' header line."""
    records = []
    for line in Path(path).read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        index, a_high, a_low, flag = line.split("\t")
        records.append(ReportRecord(int(index), float(a_high), float(a_low),
                                    flag.strip() == "1"))
    return records
