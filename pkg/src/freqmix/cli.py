"""Command-line interface.

Subcommands: ``attack`` (batch adversarial generation), ``patch`` (export
pattern/patch PNGs), ``noise`` (sign-noise baselines), ``check`` (verify the
epsilon-ball over a corpus), ``analyze`` (frequency-dominance report for a
feature-map file), ``decompose`` (export low/high frequency components).

Attack parameters can come from a flat ``key = value`` config file via
``--config``; explicit command-line flags win over file values.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import (
    DominanceMaskPair,
    build_masks,
    dominance,
    format_report,
    resize_mask_nearest,
)
from .attack import (
    AttackConfig,
    apply_noise,
    build_patch,
    random_noise,
    semi_random_noise,
)
from .batch import RunManifest, check_corpus, run_batch
from .frequency import decompose, gaussian_kernel
from .imgio import list_images, load_image, quantize, save_png
from .patterns import KINDS, PatternSpec, render
from .tensorfile import read_tensor
from .tiling import TileConfig, resize_bilinear

# Config-file keys mirror the attack configuration field names.
_CONFIG_KEYS = {
    "epsilon": float,
    "lambda": float,
    "k": int,
    "pattern": str,
    "density": int,
    "tile_scheme": int,
    "variant": str,
    "seed": int,
    "canvas": int,
    "stroke_width": int,
    "intermediate": int,
    "threads": int,
}

_DEFAULTS = {
    "epsilon": 16.0,
    "lambda": 1.0,
    "k": 4,
    "pattern": "circle",
    "density": 12,
    "tile_scheme": 6,
    "variant": "with-lf",
    "seed": 0,
    "canvas": 600,
    "stroke_width": 4,
    "intermediate": 300,
    "threads": 0,
}


def load_config_file(path) -> dict:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _CONFIG_KEYS[key](value.strip())
    return values


def resolve_settings(args: argparse.Namespace) -> dict:
    """Resolve defaults < config file < explicit flags, in that order."""
    settings = dict(_DEFAULTS)
    if getattr(args, "config", None):
        settings.update(load_config_file(args.config))
    for key in _CONFIG_KEYS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            settings[key] = flag_value
    return settings


def attack_config_from(settings: dict) -> AttackConfig:
    return AttackConfig(
        epsilon=settings["epsilon"],
        lam=settings["lambda"],
        k=settings["k"],
        variant=settings["variant"],
        pattern=PatternSpec(
            kind=settings["pattern"],
            density=settings["density"],
            canvas=settings["canvas"],
            stroke_width=settings["stroke_width"],
        ),
        tile=TileConfig(
            scheme=settings["tile_scheme"],
            intermediate=settings["intermediate"],
        ),
        seed=settings["seed"],
    )


def _add_attack_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="flat key = value config file")
    parser.add_argument("--epsilon", type=float, help="l-infinity budget (default 16)")
    parser.add_argument("--lambda", dest="lambda", type=float,
                        help="high-frequency weight (default 1.0)")
    parser.add_argument("--k", type=int, help="Gaussian kernel half-width (default 4)")
    parser.add_argument("--pattern", choices=KINDS, help="pattern kind (default circle)")
    parser.add_argument("--density", type=int, help="concentric shape count (default 12)")
    parser.add_argument("--tile-scheme", dest="tile_scheme", type=int,
                        help="tile repetitions per side (default 6)")
    parser.add_argument("--variant", choices=("with-lf", "without-lf"),
                        help="keep or drop the image's own high frequencies")
    parser.add_argument("--seed", type=int, help="base seed for noise baselines")
    parser.add_argument("--canvas", type=int, help="pattern raster size (default 600)")
    parser.add_argument("--stroke-width", dest="stroke_width", type=int,
                        help="ring stroke width (default 4)")
    parser.add_argument("--intermediate", type=int,
                        help="tile pipeline working size (default 300)")
    parser.add_argument("--threads", type=int, help="worker threads, 0 = auto")


def cmd_attack(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    manifest = RunManifest(
        input_dir=args.input_dir,
        output_dir=args.output_dir,
        attack=attack_config_from(settings),
        patch_file=args.patch_file,
        emit_patch=args.emit_patch,
        emit_report=args.emit_report,
        threads=settings["threads"],
    )
    summary = run_batch(manifest)
    print(f"processed {summary.processed}, failed {summary.failed} "
          f"in {summary.wall_seconds:.2f}s")
    if summary.processed:
        print(f"max|delta| per image: min {summary.delta_min:g} "
              f"mean {summary.delta_mean:g} max {summary.delta_max:g}")
    for name, error in summary.failures:
        print(f"  failed {name}: {error}", file=sys.stderr)
    if manifest.emit_report:
        report_path = Path(args.output_dir) / "run_summary.json"
        report_path.write_text(json.dumps(summary.as_dict(), indent=2) + "\n")
        print(f"summary written to {report_path}")
    return 0 if summary.failed == 0 else 1


def cmd_patch(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    config = attack_config_from(settings)
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    proto = render(config.pattern)
    stem = f"{config.pattern.kind}_d{config.pattern.density}"
    save_png(out_dir / f"proto_{stem}.png", proto)
    tile = TileConfig(
        scheme=settings["tile_scheme"],
        intermediate=settings["intermediate"],
        target_h=args.target_size,
        target_w=args.target_size,
    )
    save_png(out_dir / f"patch_{stem}_n{tile.scheme}.png", build_patch(config.pattern, tile))
    print(f"wrote proto_{stem}.png and patch_{stem}_n{tile.scheme}.png to {out_dir}")
    return 0


def cmd_noise(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    files = list_images(args.input_dir)
    if not files:
        print(f"error: no decodable images under {args.input_dir}", file=sys.stderr)
        return 2
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    epsilon = settings["epsilon"]
    failed = 0
    for index, path in enumerate(sorted(files)):
        try:
            image = load_image(path)
            rng = np.random.default_rng([settings["seed"], index])
            if args.mode == "random":
                total = image.size
                count = int(round(args.fraction * total))
                flat = rng.choice(total, size=count, replace=False)
                locations = np.stack(np.unravel_index(flat, image.shape), axis=1)
                noise = random_noise(image.shape, locations, epsilon, seed=rng)
            else:
                length = image.shape[0] if args.axis == "h" else image.shape[1]
                count = int(round(args.fraction * length))
                indices = rng.choice(length, size=count, replace=False)
                noise = semi_random_noise(image.shape, indices, epsilon,
                                          axis=args.axis, seed=rng)
            save_png(out_dir / (path.stem + ".png"),
                     quantize(apply_noise(image, noise, epsilon)))
        except Exception as exc:
            failed += 1
            print(f"  failed {path.name}: {exc}", file=sys.stderr)
    print(f"wrote {len(files) - failed} noisy images to {out_dir}")
    return 0 if failed == 0 else 1


def cmd_check(args: argparse.Namespace) -> int:
    report = check_corpus(args.original_dir, args.adversarial_dir, args.epsilon)
    print(f"checked {report.checked} pairs at epsilon = {args.epsilon:g}")
    for name in report.missing:
        print(f"  missing counterpart: {name}")
    for line in report.violations:
        print(f"  violation: {line}")
    print(f"{len(report.violations)} violations, {len(report.missing)} missing")
    return 0 if report.ok else 1


def cmd_analyze(args: argparse.Namespace) -> int:
    image = load_image(args.image)
    features = read_tensor(args.features)
    if features.ndim == 2:
        features = features[np.newaxis]
    if features.ndim != 3:
        print(f"error: feature tensor must be rank 2 or 3, got rank {features.ndim}",
              file=sys.stderr)
        return 2
    feat_h, feat_w = features.shape[1], features.shape[2]
    kernel = gaussian_kernel(args.k)
    if args.registration == "image":
        # Bring the image to feature resolution first, then threshold.
        resized = resize_bilinear(image, feat_h, feat_w)
        masks = build_masks(decompose(resized, kernel).hfc, args.tau, reduce=args.reduce)
    else:
        masks = build_masks(decompose(image, kernel).hfc, args.tau, reduce=args.reduce)
        shrunk = resize_mask_nearest(masks.m_high, feat_h, feat_w)
        masks = DominanceMaskPair(m_high=shrunk,
                                  m_low=(1 - shrunk).astype(np.uint8),
                                  tau=masks.tau)
    stats = [dominance(fmap, masks) for fmap in features]
    text = format_report(stats)
    if args.out:
        Path(args.out).write_text(text)
        print(f"report written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    files = list_images(args.input_dir)
    if not files:
        print(f"error: no decodable images under {args.input_dir}", file=sys.stderr)
        return 2
    lfc_dir = Path(args.lfc_dir)
    hfc_dir = Path(args.hfc_dir)
    lfc_dir.mkdir(parents=True, exist_ok=True)
    hfc_dir.mkdir(parents=True, exist_ok=True)
    kernel = gaussian_kernel(args.k)
    for path in files:
        pair = decompose(load_image(path), kernel)
        save_png(lfc_dir / (path.stem + ".png"), quantize(pair.lfc))
        save_png(hfc_dir / (path.stem + ".png"), quantize(pair.hfc + args.hfc_offset))
    # The residual is signed; record how it was shifted into display range.
    (hfc_dir / "metadata.json").write_text(
        json.dumps({"hfc_offset": args.hfc_offset, "k": args.k}) + "\n"
    )
    print(f"decomposed {len(files)} images at k = {args.k}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freqmix",
        description="Training-free adversarial images from frequency-swapped patterns.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_attack = sub.add_parser("attack", help="attack every image in a directory")
    p_attack.add_argument("input_dir", type=Path)
    p_attack.add_argument("output_dir", type=Path)
    _add_attack_flags(p_attack)
    p_attack.add_argument("--patch-file", type=Path,
                          help="use this image as the patch instead of a pattern")
    p_attack.add_argument("--emit-patch", action="store_true",
                          help="also write the patch used, as _patch.png")
    p_attack.add_argument("--emit-report", action="store_true",
                          help="also write run_summary.json")
    p_attack.set_defaults(func=cmd_attack)

    p_patch = sub.add_parser("patch", help="export pattern and patch PNGs")
    p_patch.add_argument("output_dir", type=Path)
    _add_attack_flags(p_patch)
    p_patch.add_argument("--target-size", type=int, default=299,
                         help="patch output side in pixels (default 299)")
    p_patch.set_defaults(func=cmd_patch)

    p_noise = sub.add_parser("noise", help="sign-noise baselines over a directory")
    p_noise.add_argument("input_dir", type=Path)
    p_noise.add_argument("output_dir", type=Path)
    _add_attack_flags(p_noise)
    p_noise.add_argument("--mode", choices=("random", "semi-random"), default="random")
    p_noise.add_argument("--axis", choices=("h", "w"), default="h",
                         help="slice axis for semi-random mode")
    p_noise.add_argument("--fraction", type=float, default=1.0,
                         help="fraction of positions (or slices) perturbed")
    p_noise.set_defaults(func=cmd_noise)

    p_check = sub.add_parser("check", help="verify the epsilon-ball over a corpus")
    p_check.add_argument("original_dir", type=Path)
    p_check.add_argument("adversarial_dir", type=Path)
    p_check.add_argument("--epsilon", type=float, required=True)
    p_check.set_defaults(func=cmd_check)

    p_analyze = sub.add_parser("analyze",
                               help="frequency-dominance report for feature maps")
    p_analyze.add_argument("image", type=Path)
    p_analyze.add_argument("features", type=Path,
                           help="tensor container with (C, H, W) feature maps")
    p_analyze.add_argument("--k", type=int, default=4)
    p_analyze.add_argument("--tau", type=float, default=20.0)
    p_analyze.add_argument("--reduce", choices=("max", "none"), default="max")
    p_analyze.add_argument("--registration", choices=("image", "mask"), default="image",
                           help="resize the image to feature resolution, or shrink the mask")
    p_analyze.add_argument("--out", type=Path, help="write report here instead of stdout")
    p_analyze.set_defaults(func=cmd_analyze)

    p_dec = sub.add_parser("decompose", help="export low/high frequency components")
    p_dec.add_argument("input_dir", type=Path)
    p_dec.add_argument("lfc_dir", type=Path)
    p_dec.add_argument("hfc_dir", type=Path)
    p_dec.add_argument("--k", type=int, default=4)
    p_dec.add_argument("--hfc-offset", type=float, default=128.0,
                       help="shift added to the signed residual before quantization")
    p_dec.set_defaults(func=cmd_decompose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
