"""Command-line front end.

Subcommands:
  extract   manifest + config -> feature CSV
  classify  feature CSV -> confusion matrix CSV + accuracy report
  synth     generate synthetic corpora / single textures as PNG
  bank      dump the dyadic filter-bank layout as JSON

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from texbank import classify, gabor, pipeline, synth
from texbank.errors import IoError, TexbankError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="texbank", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="extract fused features to CSV")
    p_extract.add_argument("--manifest", required=True, help="manifest CSV (path,label,case_id)")
    p_extract.add_argument("--config", help="run-config JSON (defaults reproduce the reference setup)")
    p_extract.add_argument("--out", required=True, help="output feature CSV")
    p_extract.add_argument("--jobs", type=int, default=pipeline.default_jobs(),
                           help="worker processes (default: logical cores)")

    p_classify = sub.add_parser("classify", help="LOOCV classification report")
    p_classify.add_argument("--features", required=True, help="feature CSV from 'extract'")
    p_classify.add_argument("--out", required=True,
                            help="output prefix; writes <out>.confusion.csv and <out>.report.txt")

    p_synth = sub.add_parser("synth", help="generate synthetic textures")
    p_synth.add_argument("--kind", required=True, choices=["corpus", "fbm", "grating", "noise"])
    p_synth.add_argument("--out", required=True, help="output directory")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--side", type=int, default=512)
    p_synth.add_argument("--per-class", type=int, default=20, help="corpus samples per class")
    p_synth.add_argument("--hurst", type=float, default=0.5, help="fbm Hurst exponent")
    p_synth.add_argument("--frequency", type=float, default=32 * math.sqrt(2.0),
                         help="grating frequency, cycles/image-width")
    p_synth.add_argument("--orientation-deg", type=float, default=0.0)
    p_synth.add_argument("--phase", type=float, default=0.0)

    p_bank = sub.add_parser("bank", help="dump the filter-bank layout as JSON")
    p_bank.add_argument("--nc", type=int, required=True, help="image width (power of two)")
    p_bank.add_argument("--out", required=True, help="output JSON path")
    p_bank.add_argument("--orientations", type=int, default=4)
    p_bank.add_argument("--freq-bandwidth", type=float, default=1.0, help="octaves")
    p_bank.add_argument("--angular-bandwidth-deg", type=float, default=45.0)
    p_bank.add_argument("--elliptical", action="store_true",
                        help="use the anisotropic envelope instead of the circular one")
    return parser


def _cmd_extract(args) -> int:
    config = pipeline.RunConfig.from_json(args.config) if args.config else pipeline.RunConfig()
    rows = pipeline.read_manifest(args.manifest)
    dataset = pipeline.extract_features(rows, config, jobs=max(1, args.jobs))
    pipeline.write_features_csv(args.out, dataset)
    print(f"wrote {len(dataset)} samples x {len(dataset.feature_names)} features to {args.out}")
    return 0


def _cmd_classify(args) -> int:
    dataset = pipeline.read_features_csv(args.features)
    cm = classify.loocv(dataset)
    report = classify.render_report(cm)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    confusion_path = out.with_name(out.name + ".confusion.csv")
    report_path = out.with_name(out.name + ".report.txt")
    _write_text(confusion_path, classify.confusion_to_csv(cm))
    _write_text(report_path, report)
    print(report, end="")
    print(f"wrote {confusion_path} and {report_path}")
    return 0


def _save_png(path: Path, values: np.ndarray):
    img = np.clip(np.rint(np.asarray(values, dtype=np.float64)), 0, 255).astype(np.uint8)
    try:
        Image.fromarray(img, mode="L").save(path)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _write_text(path: Path, text: str):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _cmd_synth(args) -> int:
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out_dir}: {exc}") from exc
    if args.kind == "corpus":
        samples = synth.four_class_corpus(args.seed, args.per_class, args.side)
        manifest_lines = ["path,label,case_id"]
        for sample_id, img, label in samples:
            name = f"{sample_id}.png"
            _save_png(out_dir / name, img)
            manifest_lines.append(f"{name},{label},{sample_id}")
        _write_text(out_dir / "manifest.csv", "\n".join(manifest_lines) + "\n")
        print(f"wrote {len(samples)} images + manifest.csv to {out_dir}")
        return 0
    if args.kind == "fbm":
        surf = synth.fbm_surface(args.side, args.hurst, args.seed)
        name = f"fbm_h{args.hurst:g}_seed{args.seed}.png"
        _save_png(out_dir / name, surf)
    elif args.kind == "grating":
        img = synth.grating(args.side, args.frequency, math.radians(args.orientation_deg),
                            args.phase)
        name = f"grating_f{args.frequency:g}_o{args.orientation_deg:g}_seed{args.seed}.png"
        _save_png(out_dir / name, img)
    else:
        img = np.clip(synth.white_noise(args.side, args.seed), 0, 255)
        name = f"noise_seed{args.seed}.png"
        _save_png(out_dir / name, img)
    print(f"wrote {out_dir / name}")
    return 0


def _cmd_bank(args) -> int:
    bank = gabor.plan_bank(
        args.nc,
        orientation_count=args.orientations,
        b_f=args.freq_bandwidth,
        b_theta=math.radians(args.angular_bandwidth_deg),
        circular=not args.elliptical,
    )
    _write_text(Path(args.out), json.dumps(gabor.bank_to_dict(bank), indent=2) + "\n")
    print(f"wrote {len(bank.filters)} filters to {args.out}")
    return 0


_COMMANDS = {
    "extract": _cmd_extract,
    "classify": _cmd_classify,
    "synth": _cmd_synth,
    "bank": _cmd_bank,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except TexbankError as exc:
        print(f"texbank {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
