"""Multilevel 2-D Daubechies wavelet analysis, detail thresholding and synthesis.

The transform is critically sampled and orthogonal: every axis of length
``n`` yields ``ceil(n / 2)`` approximation and detail coefficients, and the
sum of squared coefficients equals the sum of squared samples. Borders are
handled by periodization; an odd-length axis is first extended with a single
zero sample, which keeps the transform an isometry and lets synthesis return
exactly the original length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameterError, LevelOverflowError, ShapeError, TooShortError
from .image import as_gray_image

MAX_ORDER = 10


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class WaveletFilterBank:
    """Orthogonal two-channel filter bank of a Daubechies wavelet.

    ``lowpass_analysis`` is applied as a correlation: ``a[k] = sum_n h[n] x[2k+n]``.
    Synthesis filters are the same coefficients used in the transposed
    (scatter) direction, so they are stored for completeness only.
    """

    order: int
    lowpass_analysis: np.ndarray
    highpass_analysis: np.ndarray
    lowpass_synthesis: np.ndarray
    highpass_synthesis: np.ndarray

    @property
    def family(self) -> str:
        return "haar" if self.order == 1 else f"db{self.order}"

    def __len__(self) -> int:
        return len(self.lowpass_analysis)


def _daubechies_lowpass(p: int) -> np.ndarray:
    # Spectral factorization of the maxflat half-band polynomial
    # P(y) = sum_k C(p-1+k, k) y^k with y = (2 - z - 1/z) / 4, keeping the
    # roots inside the unit circle (minimum phase).
    if p == 1:
        return np.array([1.0, 1.0]) / math.sqrt(2.0)
    coeffs = [math.comb(p - 1 + k, k) for k in range(p)]
    y_roots = np.roots(coeffs[::-1])
    poly = np.array([1.0 + 0j])
    for _ in range(p):
        poly = np.convolve(poly, [1.0, 1.0])
    for y in y_roots:
        pair = np.roots([1.0, -(2.0 - 4.0 * y), 1.0])
        z = pair[np.argmin(np.abs(pair))]
        poly = np.convolve(poly, [1.0, -z])
    h = np.real(poly)
    return h * math.sqrt(2.0) / h.sum()


@lru_cache(maxsize=None)
def make_filter_bank(order: int = 4) -> WaveletFilterBank:
    """Daubechies filter bank with ``2 * order`` taps; order 1 is Haar."""
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise InvalidParameterError(f"wavelet order must be an integer, got {order!r}")
    order = int(order)
    if not 1 <= order <= MAX_ORDER:
        raise InvalidParameterError(f"wavelet order must be in [1, {MAX_ORDER}], got {order}")
    lo = _daubechies_lowpass(order)
    n = np.arange(len(lo))
    hi = (-1.0) ** n * lo[::-1]
    return WaveletFilterBank(
        order=order,
        lowpass_analysis=_readonly(lo),
        highpass_analysis=_readonly(hi),
        lowpass_synthesis=_readonly(lo[::-1]),
        highpass_synthesis=_readonly(hi[::-1]),
    )


# ---------------------------------------------------------------------------
# 1-D transform along an arbitrary axis


@lru_cache(maxsize=256)
def _tap_indices(n_even: int, taps: int) -> np.ndarray:
    # row t holds the periodized sample index touched by tap t for every output k
    k = np.arange(n_even // 2)
    idx = (2 * k[None, :] + np.arange(taps)[:, None]) % n_even
    idx.setflags(write=False)
    return idx


def _analysis(x: np.ndarray, bank: WaveletFilterBank) -> tuple[np.ndarray, np.ndarray]:
    """Single-level analysis along the last axis of ``x``."""
    n = x.shape[-1]
    if n % 2:
        x = np.concatenate([x, np.zeros(x.shape[:-1] + (1,))], axis=-1)
        n += 1
    lo, hi = bank.lowpass_analysis, bank.highpass_analysis
    idx = _tap_indices(n, len(lo))
    approx = np.zeros(x.shape[:-1] + (n // 2,))
    detail = np.zeros_like(approx)
    for t in range(len(lo)):
        cols = x[..., idx[t]]
        approx += lo[t] * cols
        detail += hi[t] * cols
    return approx, detail


def _synthesis(approx: np.ndarray, detail: np.ndarray, bank: WaveletFilterBank,
               target_len: int) -> np.ndarray:
    """Inverse of :func:`_analysis` along the last axis (the transposed operator)."""
    m = approx.shape[-1]
    n = 2 * m
    lo, hi = bank.lowpass_analysis, bank.highpass_analysis
    idx = _tap_indices(n, len(lo))
    out = np.zeros(approx.shape[:-1] + (n,))
    for t in range(len(lo)):
        # indices within one tap row are distinct, so fancy += is safe
        out[..., idx[t]] += lo[t] * approx + hi[t] * detail
    return out[..., :target_len]


def dwt1d(signal, bank: WaveletFilterBank) -> tuple[np.ndarray, np.ndarray]:
    """One analysis step of a 1-D signal: ``(approx, detail)``, each ``ceil(n/2)`` long."""
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise ShapeError(f"expected a 1-D signal, got shape {x.shape}")
    if x.size < 2:
        raise TooShortError(f"signal length must be >= 2, got {x.size}")
    return _analysis(x, bank)


def idwt1d(approx, detail, bank: WaveletFilterBank, target_len: int) -> np.ndarray:
    a = np.asarray(approx, dtype=np.float64)
    d = np.asarray(detail, dtype=np.float64)
    if a.ndim != 1 or a.shape != d.shape:
        raise ShapeError(f"subband shapes differ: {a.shape} vs {d.shape}")
    if target_len not in (2 * a.size - 1, 2 * a.size) or target_len < 1:
        raise ShapeError(f"target length {target_len} incompatible with {a.size} coefficients")
    return _synthesis(a, d, bank, target_len)


# ---------------------------------------------------------------------------
# 2-D pyramid


class DetailBands(NamedTuple):
    horizontal: np.ndarray
    vertical: np.ndarray
    diagonal: np.ndarray


@dataclass(frozen=True, eq=False)
class WaveletPyramid:
    """Coarsest approximation plus per-level detail triples.

    ``details[0]`` is the finest level (level 1), ``details[-1]`` the coarsest.
    """

    approx: np.ndarray
    details: tuple[DetailBands, ...]

    @property
    def levels(self) -> int:
        return len(self.details)

    def coefficient_energy(self) -> float:
        total = float(np.sum(self.approx ** 2))
        for bands in self.details:
            total += sum(float(np.sum(b ** 2)) for b in bands)
        return total


def subband_shapes(height: int, width: int, levels: int) -> list[tuple[int, int]]:
    """Image shape followed by the subband shape of each level."""
    shapes = [(height, width)]
    for _ in range(levels):
        h, w = shapes[-1]
        shapes.append(((h + 1) // 2, (w + 1) // 2))
    return shapes


def decompose(img, bank: WaveletFilterBank, levels: int = 2) -> WaveletPyramid:
    """Separable multilevel analysis: rows first, then columns, on each approximation."""
    x = as_gray_image(img)
    if levels < 1:
        raise InvalidParameterError(f"levels must be >= 1, got {levels}")
    if min(x.shape) / 2 ** levels < 1:
        raise LevelOverflowError(f"{levels} levels too many for a {x.shape[1]}x{x.shape[0]} image")
    details = []
    approx = x
    for _ in range(levels):
        row_lo, row_hi = _analysis(approx, bank)
        ll, lh = _analysis(row_lo.T, bank)
        hl, hh = _analysis(row_hi.T, bank)
        # horizontal detail: lowpass along rows, highpass along columns
        details.append(DetailBands(lh.T, hl.T, hh.T))
        approx = ll.T
    return WaveletPyramid(approx=approx, details=tuple(details))


def _keep_count(n: int, keep_ratio: float) -> int:
    # round away float noise such as 0.2 * 10 = 2.0000000000000004
    return max(1, math.ceil(round(keep_ratio * n, 9)))


def threshold_details(pyr: WaveletPyramid, keep_ratio: float) -> WaveletPyramid:
    """Hard-threshold each level's pooled detail coefficients.

    The threshold is the magnitude of the ``ceil(keep_ratio * count)``-th
    largest coefficient of the level; everything strictly smaller becomes 0.
    Ties at the threshold all survive.
    """
    if not (0.0 < keep_ratio <= 1.0):
        raise InvalidParameterError(f"keep_ratio must be in (0, 1], got {keep_ratio}")
    new_details = []
    for bands in pyr.details:
        mags = np.concatenate([np.abs(b).ravel() for b in bands])
        k = _keep_count(mags.size, keep_ratio)
        thresh = np.partition(mags, mags.size - k)[mags.size - k]
        new_details.append(DetailBands(*(np.where(np.abs(b) < thresh, 0.0, b) for b in bands)))
    return WaveletPyramid(approx=pyr.approx.copy(), details=tuple(new_details))


def reconstruct(pyr: WaveletPyramid, bank: WaveletFilterBank, target_width: int,
                target_height: int, clamp: bool = True) -> np.ndarray:
    """Level-by-level synthesis back to a ``target_height x target_width`` image.

    The output is clamped to [0, 1] unless ``clamp`` is false.
    """
    shapes = subband_shapes(target_height, target_width, pyr.levels)
    if pyr.approx.shape != shapes[-1]:
        raise ShapeError(f"approximation {pyr.approx.shape} does not match target "
                         f"{target_width}x{target_height}")
    for level, bands in enumerate(pyr.details, start=1):
        for b in bands:
            if b.shape != shapes[level]:
                raise ShapeError(f"level {level} subband {b.shape} does not match "
                                 f"expected {shapes[level]}")
    approx = pyr.approx
    for level in range(pyr.levels, 0, -1):
        h, w = shapes[level - 1]
        bands = pyr.details[level - 1]
        row_lo = _synthesis(approx.T, bands.horizontal.T, bank, h).T
        row_hi = _synthesis(bands.vertical.T, bands.diagonal.T, bank, h).T
        approx = _synthesis(row_lo, row_hi, bank, w)
    if clamp:
        approx = np.clip(approx, 0.0, 1.0)
    return approx


def compress(img, bank: WaveletFilterBank, levels: int, keep_ratio: float) -> np.ndarray:
    """Decompose, threshold the details and reconstruct at the original size."""
    x = as_gray_image(img)
    pyr = threshold_details(decompose(x, bank, levels), keep_ratio)
    return reconstruct(pyr, bank, x.shape[1], x.shape[0])


def psnr(reference: np.ndarray, test: np.ndarray, peak: float = 1.0) -> float:
    mse = float(np.mean((np.asarray(reference) - np.asarray(test)) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)
