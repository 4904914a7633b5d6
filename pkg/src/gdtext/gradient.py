"""Sobel edges, horizontal gradient and the windowed gradient-difference map."""

from __future__ import annotations

import numpy as np

from ._kernels import sliding_minmax_rows
from .errors import InvalidParameterError, TooShortError
from .image import as_gray_image

DEFAULT_WINDOW = 11
HIST_BINS = 256
# GD peaks below this are floating-point residue (a one-level 8-bit step gives ~4e-3)
GD_NOISE_FLOOR = 1e-9

SOBEL_X = np.array([[-1.0, 0.0, 1.0],
                    [-2.0, 0.0, 2.0],
                    [-1.0, 0.0, 1.0]])
SOBEL_Y = SOBEL_X.T


def sobel_edges(img) -> np.ndarray:
    """Sobel gradient magnitude ``sqrt(gx**2 + gy**2)``, not normalized.

    Borders use half-sample symmetric extension. Each kernel is applied as a
    central difference followed by ``[1, 2, 1]`` smoothing, so flat regions
    give exactly 0.
    """
    x = as_gray_image(img)
    p = np.pad(x, 1, mode="symmetric")
    dx = p[:, 2:] - p[:, :-2]
    dy = p[2:, :] - p[:-2, :]
    gx = dx[:-2, :] + 2.0 * dx[1:-1, :] + dx[2:, :]
    gy = dy[:, :-2] + 2.0 * dy[:, 1:-1] + dy[:, 2:]
    return np.hypot(gx, gy)


def horizontal_gradient(edge_img) -> np.ndarray:
    """Forward difference ``F(x+1, y) - F(x, y)``; the last column is 0."""
    f = as_gray_image(edge_img)
    if f.shape[1] < 2:
        raise TooShortError("horizontal gradient needs width >= 2")
    g = np.zeros_like(f)
    g[:, :-1] = f[:, 1:] - f[:, :-1]
    return g


def window_minmax(grad, window_width: int) -> tuple[np.ndarray, np.ndarray]:
    """Min and max over a centered ``1 x window_width`` window, truncated at borders."""
    g = as_gray_image(grad)
    _check_window(window_width, g.shape[1])
    return sliding_minmax_rows(np.ascontiguousarray(g), window_width // 2)


def _check_window(n, width: int) -> None:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidParameterError(f"window width must be an integer, got {n!r}")
    if n < 1 or n % 2 == 0:
        raise InvalidParameterError(f"window width must be a positive odd number, got {n}")
    if n > width:
        raise InvalidParameterError(f"window width {n} exceeds image width {width}")


def gradient_difference(grad, window_width: int = DEFAULT_WINDOW) -> np.ndarray:
    """Per-pixel ``max - min`` of the gradient over the horizontal window."""
    lo, hi = window_minmax(grad, window_width)
    return hi - lo


def otsu_bin(hist) -> int:
    """Index ``k`` maximizing the between-class variance of bins ``[0..k]`` vs ``[k+1..]``.

    Candidates with an empty class score 0. Ties resolve to the lowest ``k``.
    """
    counts = np.asarray(hist, dtype=np.int64)
    levels = np.arange(counts.size, dtype=np.int64)
    # integer prefix sums keep equal candidates bit-identical after conversion
    w0 = np.cumsum(counts)
    s0 = np.cumsum(counts * levels)
    total, total_sum = int(w0[-1]), int(s0[-1])
    w1 = total - w0
    with np.errstate(divide="ignore", invalid="ignore"):
        num = (total_sum * w0.astype(np.float64) - total * s0.astype(np.float64)) ** 2
        score = num / (w0.astype(np.float64) * w1.astype(np.float64))
    score[(w0 == 0) | (w1 == 0)] = 0.0
    return int(np.argmax(score))


def gd_histogram(gd: np.ndarray, bins: int = HIST_BINS) -> tuple[np.ndarray, np.ndarray]:
    """Bin index of every pixel and the bin counts over ``[0, max(gd)]``."""
    peak = float(gd.max())
    if peak <= 0.0:
        idx = np.zeros(gd.shape, dtype=np.int64)
    else:
        idx = np.minimum((gd * (bins / peak)).astype(np.int64), bins - 1)
    return idx, np.bincount(idx.ravel(), minlength=bins)


def binarize_gd(gd) -> np.ndarray:
    """Otsu binarization of a GD map with a 256-bin histogram.

    Pixels in bins above the Otsu split are text candidates. A map with a
    single distinct value, or whose peak is below ``GD_NOISE_FLOOR``, has no
    split and yields an all-false mask.
    """
    g = as_gray_image(gd)
    if g.max() == g.min() or g.max() < GD_NOISE_FLOOR:
        return np.zeros(g.shape, dtype=bool)
    idx, hist = gd_histogram(g)
    k = otsu_bin(hist)
    return idx > k


def otsu_threshold_value(gd) -> float:
    """GD value at the lower edge of the first foreground bin."""
    g = as_gray_image(gd)
    _, hist = gd_histogram(g)
    return (otsu_bin(hist) + 1) * float(g.max()) / HIST_BINS
