"""Command-line front end: ``gdtext detect | eval | compress``.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 processing error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from . import dwt
from .batch import detect_paths, dump_json, run_eval
from .errors import EmptyInputError, GDTextError, InvalidParameterError
from .fusion import StructuringElement
from .image import list_images, load_gray, to_uint8
from .pipeline import PipelineConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_PROCESSING = 3

log = logging.getLogger("gdtext")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for I/O here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _odd_se(text: str) -> StructuringElement:
    try:
        return StructuringElement.parse(text)
    except GDTextError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gdtext", description="Gradient-difference text localization.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="flat JSON config file")
    common.add_argument("--workers", type=int, help="worker threads (default: $GDTEXT_WORKERS or CPU count)")
    common.add_argument("--window", type=int, dest="window_width")
    common.add_argument("--levels", type=int)
    common.add_argument("--keep-ratio", type=float, dest="keep_ratio")
    common.add_argument("--wavelet-order", type=int, dest="wavelet_order")
    common.add_argument("--se", type=_odd_se, help="structuring element WxH, e.g. 15x5")
    common.add_argument("--min-area", dest="min_area", help="pixel count or 'auto'")

    det = sub.add_parser("detect", parents=[common], help="localize text blocks")
    det.add_argument("input", type=Path, help="image file or directory of images")
    det.add_argument("--out", type=Path, help="output directory for box lists and renderings")
    det.add_argument("--trace", action="store_true", help="also write every stage raster")

    ev = sub.add_parser("eval", parents=[common], help="evaluate DR/FPR/MDR against ground truth")
    ev.add_argument("image_dir", type=Path)
    ev.add_argument("gt_dir", type=Path)
    ev.add_argument("--coverage-tau", type=float, dest="coverage_tau")
    ev.add_argument("--miss-tau", type=float, dest="miss_tau")
    ev.add_argument("--report", type=Path, help="write the JSON report here")

    comp = sub.add_parser("compress", help="wavelet round trip with PSNR report")
    comp.add_argument("image", type=Path)
    comp.add_argument("--keep-ratio", type=float, default=0.2, dest="keep_ratio")
    comp.add_argument("--levels", type=int, default=2)
    comp.add_argument("--wavelet-order", type=int, default=4, dest="wavelet_order")
    comp.add_argument("--out", type=Path, help="write the reconstructed image here")
    return parser


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """Defaults, then the config file, then explicit flags."""
    cfg = PipelineConfig.load(args.config) if getattr(args, "config", None) else PipelineConfig()
    overrides = {}
    for key in ("window_width", "levels", "keep_ratio", "wavelet_order", "min_area",
                "coverage_tau", "miss_tau"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    se = getattr(args, "se", None)
    if se is not None:
        overrides.update(se_width=se.width, se_height=se.height)
    if "min_area" in overrides and overrides["min_area"] != "auto":
        try:
            overrides["min_area"] = int(overrides["min_area"])
        except ValueError:
            raise _UsageError(f"--min-area must be an integer or 'auto', got {overrides['min_area']!r}")
    return PipelineConfig.from_dict(overrides, base=cfg) if overrides else cfg


def _cmd_detect(args) -> int:
    cfg = resolve_config(args)
    if args.input.is_dir():
        paths = list_images(args.input)
        if not paths:
            log.error("no images in %s", args.input)
            return EXIT_IO
    elif args.input.is_file():
        paths = [args.input]
    else:
        log.error("no such file or directory: %s", args.input)
        return EXIT_IO
    outcomes = detect_paths(paths, cfg, args.out, trace=args.trace, workers=args.workers)
    for o in outcomes:
        if o.error is None:
            print(f"{o.path.name}: {len(o.blocks)} block(s)")
            for b in o.blocks:
                print(f"  x0={b.x0} y0={b.y0} x1={b.x1} y1={b.y1} area={b.area}")
    kinds = {o.error_kind for o in outcomes if o.error_kind}
    if "io" in kinds:
        return EXIT_IO
    if "processing" in kinds:
        return EXIT_PROCESSING
    return EXIT_OK


def _cmd_eval(args) -> int:
    cfg = resolve_config(args)
    for d in (args.image_dir, args.gt_dir):
        if not d.is_dir():
            log.error("not a directory: %s", d)
            return EXIT_IO
    try:
        run = run_eval(args.image_dir, args.gt_dir, cfg, workers=args.workers, report_path=args.report)
    except EmptyInputError as exc:
        log.error("%s", exc)
        return EXIT_IO
    for item in run.per_image:
        if item.report is not None:
            r = item.report
            print(f"{item.image_id}: TDB={r.n_tdb} FDB={r.n_fdb} MDB={r.n_mdb} actual={r.n_actual}")
        else:
            print(f"{item.image_id}: {item.status} ({item.message})")
    r = run.report
    print(f"DR={r.dr:.2f} FPR={r.fpr:.2f} MDR={r.mdr:.2f}" + (f" flags={','.join(r.flags)}" if r.flags else ""))
    if args.report is None:
        print(dump_json(run.to_dict()), end="")
    return EXIT_OK


def _cmd_compress(args) -> int:
    try:
        img = load_gray(args.image)
    except OSError as exc:
        log.error("cannot read %s: %s", args.image, exc)
        return EXIT_IO
    bank = dwt.make_filter_bank(args.wavelet_order)
    pyr = dwt.decompose(img, bank, args.levels)
    kept = dwt.threshold_details(pyr, args.keep_ratio)
    recon = dwt.reconstruct(kept, bank, img.shape[1], img.shape[0])
    total = sum(b.size for bands in kept.details for b in bands)
    nonzero = sum(int(np.count_nonzero(b)) for bands in kept.details for b in bands)
    summary = {
        "image": str(args.image),
        "wavelet": bank.family,
        "levels": args.levels,
        "keep_ratio": args.keep_ratio,
        "detail_coefficients_kept": nonzero,
        "detail_coefficients_total": total,
        "psnr_db": round(dwt.psnr(img, recon), 4),
    }
    if args.out:
        Image.fromarray(to_uint8(recon)).save(args.out)
        summary["output"] = str(args.out)
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"detect": _cmd_detect, "eval": _cmd_eval, "compress": _cmd_compress}
    try:
        return handlers[args.command](args)
    except (_UsageError, InvalidParameterError) as exc:
        # parameter validation failures are usage errors; pipeline failures arrive as PipelineError
        log.error("%s", exc)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        log.error("%s", exc)
        return EXIT_IO
    except GDTextError as exc:
        log.error("%s", exc)
        return EXIT_PROCESSING


if __name__ == "__main__":
    sys.exit(main())
