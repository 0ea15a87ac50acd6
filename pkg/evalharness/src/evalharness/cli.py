"""Command-line entry points mirroring the harness operations.

Each subcommand prints one plain-text table.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .metrics import (
    EvalSpec,
    dominance_ratio,
    export_features,
    format_table,
    frequency_accuracy,
    midlayer_cosine,
    success_rate,
)


def _model_list(raw: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in raw.split(",") if part.strip())


def _spec(args, need_adv: bool) -> EvalSpec:
    return EvalSpec(
        model_ids=_model_list(args.models),
        clean_dir=args.clean,
        adv_dir=getattr(args, "adv", None) if need_adv else None,
        batch_size=args.batch_size,
        defense=getattr(args, "defense", None),
        layer=getattr(args, "layer", "midpoint"),
    )


def cmd_success_rate(args) -> int:
    results = success_rate(_spec(args, need_adv=True))
    headers = ["model", "pairs", "success_rate_%"]
    if args.defense:
        headers.append("defended_clean_agreement_%")
    rows = []
    for r in results:
        row = [r.model_id, r.pairs, f"{r.rate:.2f}"]
        if args.defense:
            row.append(f"{r.clean_defense_agreement:.2f}")
        rows.append(row)
    print(format_table(headers, rows), end="")
    if results and results[0].missing:
        print(f"excluded {len(results[0].missing)} unpaired files", file=sys.stderr)
    return 0


def cmd_cosine(args) -> int:
    results = midlayer_cosine(_spec(args, need_adv=True))
    rows = [[r.model_id, r.pairs, f"{r.mean_cosine:.4f}"] for r in results]
    print(format_table(["model", "pairs", "mean_cosine"], rows), end="")
    return 0


def cmd_freq_accuracy(args) -> int:
    k_list = [int(part) for part in args.k_list.split(",") if part.strip()]
    rows = frequency_accuracy(_spec(args, need_adv=False), k_list, args.work)
    table = [[r.k, r.model_id, f"{r.lfc_accuracy:.2f}", f"{r.hfc_accuracy:.2f}"]
             for r in rows]
    print(format_table(["k", "model", "lfc_accuracy_%", "hfc_accuracy_%"], table), end="")
    return 0


def cmd_dominance(args) -> int:
    result = dominance_ratio(args.model, args.image, args.work, k=args.k,
                             tau=args.tau, layer=args.layer)
    ratio = "inf" if result.lfc_dominant == 0 else f"{result.ratio:.2f}"
    print(format_table(
        ["model", "feature_maps", "hfc_dominant", "lfc_dominant", "ratio"],
        [[result.model_id, result.feature_maps, result.hfc_dominant,
          result.lfc_dominant, ratio]],
    ), end="")
    return 0


def cmd_export_features(args) -> int:
    shape = export_features(args.model, args.image, args.out, layer=args.layer)
    print(f"wrote {shape[0]} feature maps of {shape[1]}x{shape[2]} to {args.out}")
    return 0


def cmd_defend(args) -> int:
    from PIL import Image
    import numpy as np

    from .data import list_images, load_image
    from .defenses import apply_defense

    files = list_images(args.input_dir)
    if not files:
        raise ValueError(f"no decodable images under {args.input_dir}")
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for path in files:
        defended = apply_defense(load_image(path), args.defense)
        pixels = np.clip(np.rint(defended), 0, 255).astype(np.uint8)
        Image.fromarray(pixels, "RGB").save(out_dir / (path.stem + ".png"))
    print(f"wrote {len(files)} {args.defense}-defended images to {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evalharness",
        description="Score frequency-swap adversarial images against real classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, adv: bool):
        p.add_argument("--models", required=True,
                       help="comma-separated ids, e.g. torchvision:squeezenet1_1")
        p.add_argument("--clean", type=Path, required=True)
        if adv:
            p.add_argument("--adv", type=Path, required=True)
        p.add_argument("--batch-size", type=int, default=16)

    p_rate = sub.add_parser("success-rate", help="flip rate over paired directories")
    common(p_rate, adv=True)
    p_rate.add_argument("--defense", choices=("jpeg75", "gauss5", "gauss17"))
    p_rate.set_defaults(func=cmd_success_rate)

    p_cos = sub.add_parser("cosine", help="clean-vs-adversarial feature similarity")
    common(p_cos, adv=True)
    p_cos.add_argument("--layer", default="midpoint")
    p_cos.set_defaults(func=cmd_cosine)

    p_freq = sub.add_parser("freq-accuracy",
                            help="accuracy of low/high frequency components per k")
    common(p_freq, adv=False)
    p_freq.add_argument("--work", type=Path, required=True,
                        help="directory for decomposed components")
    p_freq.add_argument("--k-list", default="1,2,4,8")
    p_freq.set_defaults(func=cmd_freq_accuracy)

    p_dom = sub.add_parser("dominance",
                           help="high- vs low-frequency dominant feature map counts")
    p_dom.add_argument("--model", required=True)
    p_dom.add_argument("--image", type=Path, required=True)
    p_dom.add_argument("--work", type=Path, required=True)
    p_dom.add_argument("--k", type=int, default=4)
    p_dom.add_argument("--tau", type=float, default=20.0)
    p_dom.add_argument("--layer", default="shallow")
    p_dom.set_defaults(func=cmd_dominance)

    p_exp = sub.add_parser("export-features",
                           help="write one image's feature maps to a tensor container")
    p_exp.add_argument("--model", required=True)
    p_exp.add_argument("--image", type=Path, required=True)
    p_exp.add_argument("--out", type=Path, required=True)
    p_exp.add_argument("--layer", default="shallow")
    p_exp.set_defaults(func=cmd_export_features)

    p_def = sub.add_parser("defend",
                           help="apply an input-preprocessing defense to a directory")
    p_def.add_argument("input_dir", type=Path)
    p_def.add_argument("output_dir", type=Path)
    p_def.add_argument("--defense", choices=("jpeg75", "gauss5", "gauss17"),
                       required=True)
    p_def.set_defaults(func=cmd_defend)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
