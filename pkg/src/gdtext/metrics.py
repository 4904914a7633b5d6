"""Block-level detection metrics: detection rate, false-positive rate, misdetection rate."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InvalidParameterError
from .fusion import TextBlock

TDB = "TDB"
FDB = "FDB"

DEFAULT_COVERAGE_TAU = 0.5
DEFAULT_MISS_TAU = 0.8

Box = tuple[int, int, int, int]


@dataclass(frozen=True)
class GroundTruth:
    image_id: str
    blocks: tuple[Box, ...] = ()

    @classmethod
    def from_dict(cls, d: dict) -> "GroundTruth":
        boxes = []
        for b in d.get("boxes", []):
            if len(b) != 4:
                raise InvalidParameterError(f"ground-truth box must have 4 coordinates, got {b!r}")
            x0, y0, x1, y1 = (int(v) for v in b)
            if x1 < x0 or y1 < y0:
                raise InvalidParameterError(f"degenerate ground-truth box {b!r}")
            boxes.append((x0, y0, x1, y1))
        return cls(image_id=str(d["image_id"]), blocks=tuple(boxes))

    def to_dict(self) -> dict:
        return {"image_id": self.image_id, "boxes": [list(b) for b in self.blocks]}

    @classmethod
    def load(cls, path: str | Path) -> "GroundTruth":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


@dataclass(frozen=True)
class LabeledDetection:
    block: TextBlock
    label: str
    missing_data: bool = False

    def __post_init__(self):
        if self.label not in (TDB, FDB):
            raise InvalidParameterError(f"label must be TDB or FDB, got {self.label!r}")
        if self.missing_data and self.label != TDB:
            raise InvalidParameterError("only a TDB can be missing data")


@dataclass(frozen=True)
class EvalReport:
    """Counts and percentages (rounded to two decimals).

    ``flags`` names metrics whose denominator was zero (reported as 0) and
    marks a detection rate above 100.
    """

    n_actual: int
    n_tdb: int
    n_fdb: int
    n_mdb: int
    dr: float
    fpr: float
    mdr: float
    flags: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "n_actual": self.n_actual,
            "n_tdb": self.n_tdb,
            "n_fdb": self.n_fdb,
            "n_mdb": self.n_mdb,
            "dr": self.dr,
            "fpr": self.fpr,
            "mdr": self.mdr,
            "flags": list(self.flags),
        }


def box_area(box: Box) -> int:
    x0, y0, x1, y1 = box
    return (x1 - x0 + 1) * (y1 - y0 + 1)


def intersection_area(a: Box, b: Box) -> int:
    w = min(a[2], b[2]) - max(a[0], b[0]) + 1
    h = min(a[3], b[3]) - max(a[1], b[1]) + 1
    return w * h if w > 0 and h > 0 else 0


def _check_tau(name: str, tau: float) -> None:
    if not (0.0 < tau <= 1.0):
        raise InvalidParameterError(f"{name} must be in (0, 1], got {tau}")


def match_detections(dets: Iterable[TextBlock], gt: GroundTruth,
                     coverage_tau: float = DEFAULT_COVERAGE_TAU,
                     miss_tau: float = DEFAULT_MISS_TAU) -> list[LabeledDetection]:
    """Label each detection TDB or FDB against the ground-truth boxes.

    A detection is a TDB when its overlap with some GT box reaches
    ``coverage_tau`` of the smaller of the two areas. It is additionally
    missing data when the overlap with its best GT box (largest intersection,
    first on ties) covers less than ``miss_tau`` of that GT box. One GT box
    may validate several detections.
    """
    _check_tau("coverage_tau", coverage_tau)
    _check_tau("miss_tau", miss_tau)
    out = []
    for det in dets:
        box = det.as_box()
        d_area = box_area(box)
        best_inter, best_gt = 0, None
        covered = False
        for g in gt.blocks:
            inter = intersection_area(box, g)
            if inter == 0:
                continue
            if inter >= coverage_tau * min(d_area, box_area(g)):
                covered = True
            if inter > best_inter:
                best_inter, best_gt = inter, g
        if covered:
            missing = best_inter < miss_tau * box_area(best_gt)
            out.append(LabeledDetection(det, TDB, missing))
        else:
            out.append(LabeledDetection(det, FDB, False))
    return out


def _pct(num: int, den: int) -> float:
    return round(100.0 * num / den, 2)


def metrics_from_counts(n_tdb: int, n_fdb: int, n_mdb: int, n_actual: int) -> EvalReport:
    if n_actual < 0:
        raise InvalidParameterError(f"n_actual must be >= 0, got {n_actual}")
    flags = []
    if n_actual:
        dr = _pct(n_tdb, n_actual)
        if dr > 100.0:
            flags.append("dr_exceeds_100")
    else:
        dr = 0.0
        flags.append("dr_undefined")
    if n_tdb + n_fdb:
        fpr = _pct(n_fdb, n_tdb + n_fdb)
    else:
        fpr = 0.0
        flags.append("fpr_undefined")
    if n_tdb:
        mdr = _pct(n_mdb, n_tdb)
    else:
        mdr = 0.0
        flags.append("mdr_undefined")
    return EvalReport(n_actual, n_tdb, n_fdb, n_mdb, dr, fpr, mdr, tuple(flags))


def compute_metrics(labeled: Sequence[LabeledDetection], n_actual: int) -> EvalReport:
    n_tdb = sum(1 for d in labeled if d.label == TDB)
    n_fdb = len(labeled) - n_tdb
    n_mdb = sum(1 for d in labeled if d.missing_data)
    return metrics_from_counts(n_tdb, n_fdb, n_mdb, n_actual)


def pool_reports(reports: Iterable[EvalReport]) -> EvalReport:
    """Micro-average: sum the counts, then apply the formulas once."""
    reports = list(reports)
    return metrics_from_counts(
        sum(r.n_tdb for r in reports),
        sum(r.n_fdb for r in reports),
        sum(r.n_mdb for r in reports),
        sum(r.n_actual for r in reports),
    )
