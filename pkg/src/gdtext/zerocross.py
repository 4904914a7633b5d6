"""Column-wise zero-crossing analysis of a binary mask and small-component removal."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import label8
from .errors import InvalidParameterError
from .image import as_binary_map

NO_ROW = -1


@dataclass(frozen=True, eq=False)
class ZeroCrossingProfile:
    """Per-column transition statistics.

    A change between rows ``y - 1`` and ``y`` is recorded at row ``y``.
    Columns without any change hold ``NO_ROW`` in ``first`` and ``last``.
    """

    counts: np.ndarray
    first: np.ndarray
    last: np.ndarray

    @property
    def width(self) -> int:
        return self.counts.size


def column_transitions(mask) -> ZeroCrossingProfile:
    m = as_binary_map(mask)
    changes = m[1:] != m[:-1]
    counts = changes.sum(axis=0).astype(np.int64)
    has = counts > 0
    if m.shape[0] == 1:
        none = np.full(m.shape[1], NO_ROW)
        return ZeroCrossingProfile(counts=counts, first=none, last=none.copy())
    first = np.where(has, np.argmax(changes, axis=0) + 1, NO_ROW)
    last = np.where(has, m.shape[0] - 1 - np.argmax(changes[::-1], axis=0), NO_ROW)
    return ZeroCrossingProfile(counts=counts, first=first, last=last)


def zc_band_mask(mask, profile: ZeroCrossingProfile | None = None) -> np.ndarray:
    """Fill each column with at least two crossings between its outermost true pixels.

    A run touching the top or bottom border is closed by the border, so every
    true pixel of a qualifying column stays true. Columns with fewer than two
    crossings (uniform, or a single edge) come out empty.
    """
    m = as_binary_map(mask)
    if profile is None:
        profile = column_transitions(m)
    h = m.shape[0]
    qualifies = profile.counts >= 2
    top = np.argmax(m, axis=0)
    bottom = h - 1 - np.argmax(m[::-1], axis=0)
    rows = np.arange(h)[:, None]
    return qualifies[None, :] & (rows >= top[None, :]) & (rows <= bottom[None, :])


def label_components(mask) -> tuple[np.ndarray, int]:
    """8-connected labels (1..count, raster order) and the component count."""
    m = np.ascontiguousarray(as_binary_map(mask))
    return label8(m)


def component_areas(labels: np.ndarray, count: int) -> np.ndarray:
    """Pixel count per label; index 0 is the background."""
    return np.bincount(labels.ravel(), minlength=count + 1)


def default_min_area(height: int, width: int) -> int:
    return max(20, math.ceil(0.0005 * height * width))


def remove_small_components(mask, min_area: int) -> np.ndarray:
    """Drop 8-connected components with fewer than ``min_area`` pixels."""
    if min_area < 0:
        raise InvalidParameterError(f"min_area must be >= 0, got {min_area}")
    m = as_binary_map(mask)
    if min_area == 0:
        return m.copy()
    labels, count = label_components(m)
    keep = component_areas(labels, count) >= min_area
    keep[0] = False
    return keep[labels]
