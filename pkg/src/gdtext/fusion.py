"""Mask fusion, dilation and bounding-box extraction."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ._kernels import sliding_max_rows_u8
from .errors import InvalidParameterError, ShapeError
from .image import as_binary_map
from .zerocross import component_areas, label_components, remove_small_components

DEFAULT_SE_WIDTH = 15
DEFAULT_SE_HEIGHT = 5


@dataclass(frozen=True)
class TextBlock:
    """Axis-aligned box with inclusive pixel corners and its component's pixel count."""

    x0: int
    y0: int
    x1: int
    y1: int
    area: int = 0

    @property
    def width(self) -> int:
        return self.x1 - self.x0 + 1

    @property
    def height(self) -> int:
        return self.y1 - self.y0 + 1

    @property
    def box_area(self) -> int:
        return self.width * self.height

    def as_box(self) -> tuple[int, int, int, int]:
        return (self.x0, self.y0, self.x1, self.y1)

    def sort_key(self) -> tuple[int, int, int, int]:
        return (self.y0, self.x0, self.y1, self.x1)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class StructuringElement:
    """All-true rectangle with odd sides, anchored at its center."""

    width: int = DEFAULT_SE_WIDTH
    height: int = DEFAULT_SE_HEIGHT

    def __post_init__(self):
        for name in ("width", "height"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1 or v % 2 == 0:
                raise InvalidParameterError(f"structuring element {name} must be odd and >= 1, got {v!r}")

    @classmethod
    def parse(cls, text: str) -> "StructuringElement":
        """Build from a ``"WxH"`` string such as ``"15x5"``."""
        try:
            w, h = (int(part) for part in text.lower().split("x"))
        except ValueError:
            raise InvalidParameterError(f"structuring element must look like WxH, got {text!r}") from None
        return cls(w, h)


def and_masks(gd_mask, zc_mask) -> np.ndarray:
    a = as_binary_map(gd_mask)
    b = as_binary_map(zc_mask)
    if a.shape != b.shape:
        raise ShapeError(f"mask shapes differ: {a.shape} vs {b.shape}")
    return a & b


def dilate(mask, se: StructuringElement) -> np.ndarray:
    """Binary dilation by a rectangle; pixels outside the image count as false.

    The rectangle is separable, so this is a row-wise sliding max followed by
    a column-wise one.
    """
    m = as_binary_map(mask).astype(np.uint8)
    if se.width > 1:
        m = sliding_max_rows_u8(m, se.width // 2)
    if se.height > 1:
        m = sliding_max_rows_u8(np.ascontiguousarray(m.T), se.height // 2).T
    return m.astype(bool)


def extract_blocks(mask, min_area: int = 0) -> list[TextBlock]:
    """One block per 8-connected component with at least ``min_area`` pixels, sorted."""
    if min_area < 0:
        raise InvalidParameterError(f"min_area must be >= 0, got {min_area}")
    labels, count = label_components(mask)
    if count == 0:
        return []
    areas = component_areas(labels, count)
    ys, xs = np.nonzero(labels)
    lab = labels[ys, xs]
    big = np.iinfo(np.int64).max
    x0 = np.full(count + 1, big)
    y0 = np.full(count + 1, big)
    x1 = np.full(count + 1, -1)
    y1 = np.full(count + 1, -1)
    np.minimum.at(x0, lab, xs)
    np.minimum.at(y0, lab, ys)
    np.maximum.at(x1, lab, xs)
    np.maximum.at(y1, lab, ys)
    blocks = [
        TextBlock(int(x0[i]), int(y0[i]), int(x1[i]), int(y1[i]), int(areas[i]))
        for i in range(1, count + 1)
        if areas[i] >= min_area
    ]
    blocks.sort(key=TextBlock.sort_key)
    return blocks


def localize(gd_mask, zc_mask, se: StructuringElement, min_area: int) -> list[TextBlock]:
    """AND the masks, drop small components, dilate, then box what remains."""
    fused = and_masks(gd_mask, zc_mask)
    cleaned = remove_small_components(fused, min_area)
    return extract_blocks(dilate(cleaned, se), min_area)
