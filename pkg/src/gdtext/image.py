"""Raster helpers: validation, ingestion and grayscale conversion.

Grayscale images are plain 2-D ``float64`` numpy arrays with intensities in
``[0, 1]``; binary maps are 2-D ``bool`` arrays. No wrapper classes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .errors import InvalidParameterError, ShapeError

# BT.601 luma weights
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg", ".bmp")


def as_gray_image(img) -> np.ndarray:
    """Return ``img`` as a validated 2-D float64 array.

    Raises ShapeError for non-2-D or empty input and InvalidParameterError
    for non-finite values.
    """
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D grayscale image, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"image must be at least 1x1, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError("image contains non-finite values")
    return arr


def as_binary_map(mask) -> np.ndarray:
    arr = np.asarray(mask)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"expected a non-empty 2-D mask, got shape {arr.shape}")
    return arr.astype(bool, copy=False)


def rgb_to_gray(rgb: np.ndarray) -> np.ndarray:
    """BT.601 luma of an ``(H, W, 3)`` array already scaled to [0, 1]."""
    r, g, b = LUMA_WEIGHTS
    return r * rgb[..., 0] + g * rgb[..., 1] + b * rgb[..., 2]


def load_gray(path: str | Path) -> np.ndarray:
    """Read a PNG/JPEG/BMP file into a [0, 1] grayscale array.

    8-bit channels are divided by 255; color images go through BT.601 luma.
    Alpha is dropped.
    """
    with Image.open(path) as im:
        if im.mode in ("L", "P", "1", "LA"):
            im = im.convert("L")
            data = np.asarray(im, dtype=np.float64) / 255.0
        elif im.mode in ("I;16", "I;16B", "I"):
            data = np.asarray(im, dtype=np.float64)
            data = data / (65535.0 if data.max() > 255 else 255.0)
        else:
            rgb = np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0
            data = rgb_to_gray(rgb)
    return as_gray_image(data)


def to_uint8(img: np.ndarray) -> np.ndarray:
    return np.round(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)


def save_gray(img: np.ndarray, path: str | Path) -> None:
    """Write a [0, 1] float image (or a bool mask) as an 8-bit PNG."""
    arr = np.asarray(img)
    if arr.dtype == bool:
        arr = arr.astype(np.float64)
    else:
        peak = float(arr.max()) if arr.size else 0.0
        # stage rasters such as Sobel magnitude or GD exceed 1; rescale for viewing
        if peak > 1.0 or arr.min() < 0.0:
            lo = float(arr.min())
            arr = (arr - lo) / (peak - lo) if peak > lo else np.zeros_like(arr)
    Image.fromarray(to_uint8(arr)).save(path)


def list_images(directory: str | Path) -> list[Path]:
    """Image files directly inside ``directory``, sorted by name."""
    return sorted(
        p for p in Path(directory).iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    )
