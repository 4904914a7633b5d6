"""Batch detection and evaluation over image directories."""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence, TypeVar

from PIL import Image

from .errors import EmptyInputError, GDTextError
from .fusion import TextBlock
from .image import list_images, load_gray, save_gray
from .metrics import (EvalReport, GroundTruth, compute_metrics, match_detections,
                      pool_reports)
from .pipeline import PipelineConfig, annotate, run_pipeline

log = logging.getLogger(__name__)

WORKERS_ENV = "GDTEXT_WORKERS"

T = TypeVar("T")
R = TypeVar("R")


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            n = int(raw)
        except ValueError:
            log.warning("ignoring non-integer %s=%r", WORKERS_ENV, raw)
        else:
            if n >= 1:
                return n
            log.warning("ignoring %s=%r; must be >= 1", WORKERS_ENV, raw)
    return os.cpu_count() or 1


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int | None = None) -> list[R]:
    """Apply ``fn`` with a bounded thread pool; results keep input order."""
    workers = workers or default_workers()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def boxes_document(image_id: str, blocks: Iterable[TextBlock], cfg: PipelineConfig) -> dict:
    return {
        "image_id": image_id,
        "config_hash": cfg.config_hash(),
        "blocks": [b.to_dict() for b in blocks],
    }


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


@dataclass
class DetectOutcome:
    path: Path
    blocks: list[TextBlock] = field(default_factory=list)
    error: str | None = None
    error_kind: str | None = None  # "io" or "processing"


def detect_one(path: Path, cfg: PipelineConfig, out_dir: Path | None = None,
               trace: bool = False) -> DetectOutcome:
    """Run the pipeline on one file and optionally write its box list and renderings."""
    try:
        img = load_gray(path)
    except (OSError, Image.UnidentifiedImageError, GDTextError) as exc:
        log.error("cannot read %s: %s", path, exc)
        return DetectOutcome(path, error=str(exc), error_kind="io")
    try:
        result = run_pipeline(img, cfg, trace=trace)
    except GDTextError as exc:
        log.error("processing %s failed: %s", path, exc)
        return DetectOutcome(path, error=str(exc), error_kind="processing")
    if out_dir is not None:
        stem = path.stem
        (out_dir / f"{stem}.json").write_text(dump_json(boxes_document(stem, result.blocks, cfg)))
        Image.fromarray(annotate(img, result.blocks)).save(out_dir / f"{stem}_annotated.png")
        if trace and result.intermediates:
            trace_dir = out_dir / f"{stem}_trace"
            trace_dir.mkdir(exist_ok=True)
            for name, raster in result.intermediates.items():
                save_gray(raster, trace_dir / f"{name}.png")
    return DetectOutcome(path, blocks=result.blocks)


def detect_paths(paths: Sequence[Path], cfg: PipelineConfig, out_dir: Path | None = None,
                 trace: bool = False, workers: int | None = None) -> list[DetectOutcome]:
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    return ordered_map(lambda p: detect_one(p, cfg, out_dir, trace), list(paths), workers)


@dataclass
class ImageEval:
    image_id: str
    status: str  # "ok", "skipped" or "error"
    report: EvalReport | None = None
    message: str | None = None

    def to_dict(self) -> dict:
        d = {"image_id": self.image_id, "status": self.status}
        if self.report is not None:
            d["report"] = self.report.to_dict()
        if self.message:
            d["message"] = self.message
        return d


@dataclass
class EvalRun:
    report: EvalReport
    per_image: list[ImageEval]

    def to_dict(self) -> dict:
        return {"summary": self.report.to_dict(), "images": [r.to_dict() for r in self.per_image]}


def _eval_one(path: Path, gt_dir: Path, cfg: PipelineConfig) -> ImageEval:
    gt_path = gt_dir / f"{path.stem}.json"
    if not gt_path.is_file():
        log.warning("no ground truth for %s; skipped", path.name)
        return ImageEval(path.stem, "skipped", message="missing ground truth")
    try:
        gt = GroundTruth.load(gt_path)
        img = load_gray(path)
        blocks = run_pipeline(img, cfg).blocks
    except (OSError, ValueError, KeyError, Image.UnidentifiedImageError, GDTextError) as exc:
        log.error("evaluation of %s failed: %s", path.name, exc)
        return ImageEval(path.stem, "error", message=str(exc))
    labeled = match_detections(blocks, gt, cfg.coverage_tau, cfg.miss_tau)
    return ImageEval(gt.image_id, "ok", report=compute_metrics(labeled, len(gt.blocks)))


def run_eval(image_dir: str | Path, gt_dir: str | Path, cfg: PipelineConfig | None = None,
             workers: int | None = None, report_path: str | Path | None = None) -> EvalRun:
    """Detect, match and micro-average DR/FPR/MDR over every image in ``image_dir``."""
    cfg = cfg or PipelineConfig()
    image_dir, gt_dir = Path(image_dir), Path(gt_dir)
    paths = list_images(image_dir)
    if not paths:
        raise EmptyInputError(f"no images found in {image_dir}")
    per_image = ordered_map(lambda p: _eval_one(p, gt_dir, cfg), paths, workers)
    pooled = pool_reports(r.report for r in per_image if r.report is not None)
    run = EvalRun(pooled, per_image)
    if report_path is not None:
        Path(report_path).write_text(dump_json(run.to_dict()))
    return run
