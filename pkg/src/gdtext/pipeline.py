"""End-to-end localization: compression, gradient difference, zero crossings, fusion."""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import dwt, fusion, gradient, zerocross
from .errors import GDTextError, InvalidParameterError, PipelineError
from .fusion import StructuringElement, TextBlock
from .image import as_gray_image, to_uint8
from .metrics import DEFAULT_COVERAGE_TAU, DEFAULT_MISS_TAU

AUTO = "auto"

HIGHLIGHT_RGB = (255, 0, 0)
OUTLINE_PX = 2


@dataclass(frozen=True)
class PipelineConfig:
    wavelet_order: int = 4
    levels: int = 2
    keep_ratio: float = 0.2
    window_width: int = gradient.DEFAULT_WINDOW
    se_width: int = fusion.DEFAULT_SE_WIDTH
    se_height: int = fusion.DEFAULT_SE_HEIGHT
    min_area: int | None = None  # None means scale with the image
    coverage_tau: float = DEFAULT_COVERAGE_TAU
    miss_tau: float = DEFAULT_MISS_TAU

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not 1 <= self.wavelet_order <= dwt.MAX_ORDER:
            raise InvalidParameterError(f"wavelet_order must be in [1, {dwt.MAX_ORDER}]")
        if self.levels < 1:
            raise InvalidParameterError("levels must be >= 1")
        if not 0.0 < self.keep_ratio <= 1.0:
            raise InvalidParameterError("keep_ratio must be in (0, 1]")
        if self.window_width < 1 or self.window_width % 2 == 0:
            raise InvalidParameterError("window_width must be a positive odd number")
        self.structuring_element()
        if self.min_area is not None and self.min_area < 0:
            raise InvalidParameterError("min_area must be >= 0 or auto")
        for name in ("coverage_tau", "miss_tau"):
            if not 0.0 < getattr(self, name) <= 1.0:
                raise InvalidParameterError(f"{name} must be in (0, 1]")

    def structuring_element(self) -> StructuringElement:
        return StructuringElement(self.se_width, self.se_height)

    def resolved_min_area(self, height: int, width: int) -> int:
        if self.min_area is None:
            return zerocross.default_min_area(height, width)
        return self.min_area

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        if d["min_area"] is None:
            d["min_area"] = AUTO
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any], base: "PipelineConfig | None" = None) -> "PipelineConfig":
        """Build a config from flat key/values, filling gaps from ``base`` (or defaults)."""
        known = {f.name: f for f in fields(cls)}
        unknown = set(d) - set(known)
        if unknown:
            raise InvalidParameterError(f"unknown config keys: {sorted(unknown)}")
        values = {}
        for key, raw in d.items():
            if key == "min_area":
                values[key] = None if raw in (None, AUTO) else int(raw)
            elif key in ("keep_ratio", "coverage_tau", "miss_tau"):
                values[key] = float(raw)
            else:
                if isinstance(raw, float) and not raw.is_integer():
                    raise InvalidParameterError(f"{key} must be an integer, got {raw}")
                values[key] = int(raw)
        return replace(base or cls(), **values)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "PipelineConfig":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise InvalidParameterError("config file must hold a flat JSON object")
        return cls.from_dict(data)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        return cls.from_json(Path(path).read_text())

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]


@dataclass
class PipelineResult:
    blocks: list[TextBlock]
    intermediates: dict[str, np.ndarray] | None = None


def _stage(name: str, fn: Callable, *args):
    try:
        return fn(*args)
    except GDTextError as exc:
        raise PipelineError(name, exc) from exc
    except (ValueError, FloatingPointError) as exc:
        raise PipelineError(name, exc) from exc


def run_pipeline(img, cfg: PipelineConfig | None = None, trace: bool = False,
                 compress: bool = True) -> PipelineResult:
    """Localize text blocks in a grayscale image.

    With ``trace`` every stage raster is returned in ``intermediates`` keyed by
    stage name. ``compress=False`` skips the wavelet round trip and feeds the
    input straight to the edge detector.
    """
    cfg = cfg or PipelineConfig()
    x = _stage("input", as_gray_image, img)
    h, w = x.shape
    stages: dict[str, np.ndarray] = {"input": x}

    if compress:
        bank = _stage("filter_bank", dwt.make_filter_bank, cfg.wavelet_order)
        pyr = _stage("decompose", dwt.decompose, x, bank, cfg.levels)
        pyr = _stage("threshold_details", dwt.threshold_details, pyr, cfg.keep_ratio)
        recon = _stage("reconstruct", dwt.reconstruct, pyr, bank, w, h)
    else:
        recon = x
    stages["reconstructed"] = recon

    edges = _stage("sobel_edges", gradient.sobel_edges, recon)
    grad = _stage("horizontal_gradient", gradient.horizontal_gradient, edges)
    gd = _stage("gradient_difference", gradient.gradient_difference, grad, cfg.window_width)
    gd_mask = _stage("binarize_gd", gradient.binarize_gd, gd)
    stages.update(edges=edges, gradient=grad, gd=gd, gd_mask=gd_mask)

    min_area = cfg.resolved_min_area(h, w)
    profile = _stage("column_transitions", zerocross.column_transitions, gd_mask)
    zc_band = _stage("zc_band_mask", zerocross.zc_band_mask, gd_mask, profile)
    zc_mask = _stage("remove_small_components", zerocross.remove_small_components, zc_band, min_area)
    stages.update(zc_band=zc_band, zc_mask=zc_mask)

    se = cfg.structuring_element()
    if trace:
        fused = _stage("and_masks", fusion.and_masks, gd_mask, zc_mask)
        cleaned = _stage("remove_small_components", zerocross.remove_small_components, fused, min_area)
        dilated = _stage("dilate", fusion.dilate, cleaned, se)
        blocks = _stage("extract_blocks", fusion.extract_blocks, dilated, min_area)
        stages.update(fused=fused, cleaned=cleaned, dilated=dilated)
        return PipelineResult(blocks, stages)
    blocks = _stage("localize", fusion.localize, gd_mask, zc_mask, se, min_area)
    return PipelineResult(blocks)


def annotate(img, blocks: list[TextBlock], color: tuple[int, int, int] = HIGHLIGHT_RGB) -> np.ndarray:
    """Render the image as ``(H, W, 3)`` uint8 with a 2-px outline inside each box.

    Boxes reaching outside the image are clipped to it with a warning.
    """
    x = as_gray_image(img)
    h, w = x.shape
    rgb = np.repeat(to_uint8(x)[:, :, None], 3, axis=2)
    for b in blocks:
        x0, y0, x1, y1 = max(b.x0, 0), max(b.y0, 0), min(b.x1, w - 1), min(b.y1, h - 1)
        if (x0, y0, x1, y1) != b.as_box():
            warnings.warn(f"block {b.as_box()} exceeds {w}x{h} image; clipped", stacklevel=2)
        if x0 > x1 or y0 > y1:
            continue
        t = OUTLINE_PX
        rgb[y0:min(y0 + t, y1 + 1), x0:x1 + 1] = color
        rgb[max(y1 - t + 1, y0):y1 + 1, x0:x1 + 1] = color
        rgb[y0:y1 + 1, x0:min(x0 + t, x1 + 1)] = color
        rgb[y0:y1 + 1, max(x1 - t + 1, x0):x1 + 1] = color
    return rgb
