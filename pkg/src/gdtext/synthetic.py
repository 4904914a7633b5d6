"""Synthetic text-like test images: striped rectangles on a flat, noisy background."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import Box, GroundTruth


@dataclass(frozen=True)
class SyntheticImage:
    image_id: str
    image: np.ndarray
    boxes: tuple[Box, ...]

    def ground_truth(self) -> GroundTruth:
        return GroundTruth(self.image_id, self.boxes)


def striped_rectangle(img: np.ndarray, box: Box, bar_width: int, ink: float) -> None:
    """Paint alternating ``bar_width``-pixel vertical bars of ``ink`` into ``box`` in place.

    The first bar is ink; the gaps keep the background value.
    """
    x0, y0, x1, y1 = box
    cols = np.arange(x0, x1 + 1)
    ink_cols = cols[((cols - x0) // bar_width) % 2 == 0]
    img[y0:y1 + 1, ink_cols] = ink


def _place_boxes(rng: np.random.Generator, n: int, width: int, height: int,
                 margin: int, gap: int) -> list[Box]:
    boxes: list[Box] = []
    for _ in range(1000):
        if len(boxes) == n:
            break
        bw = int(rng.integers(60, 241))
        bh = int(rng.integers(14, 41))
        x0 = int(rng.integers(margin, width - margin - bw))
        y0 = int(rng.integers(margin, height - margin - bh))
        cand = (x0, y0, x0 + bw - 1, y0 + bh - 1)
        clear = all(
            cand[2] + gap < b[0] or b[2] + gap < cand[0]
            or cand[3] + gap < b[1] or b[3] + gap < cand[1]
            for b in boxes
        )
        if clear:
            boxes.append(cand)
    return boxes


def make_image(rng: np.random.Generator, image_id: str, width: int = 640, height: int = 480,
               n_blocks: int | None = None, noise_sigma: float = 0.02,
               bar_width: int = 4) -> SyntheticImage:
    """One flat-background image with 1-4 high-contrast striped blocks plus Gaussian noise."""
    if n_blocks is None:
        n_blocks = int(rng.integers(1, 5))
    background = float(rng.uniform(0.1, 0.9))
    ink = 0.95 if background < 0.5 else 0.05
    img = np.full((height, width), background)
    boxes = _place_boxes(rng, n_blocks, width, height, margin=20, gap=40)
    for box in boxes:
        striped_rectangle(img, box, bar_width, ink)
    img += rng.normal(0.0, noise_sigma, img.shape)
    np.clip(img, 0.0, 1.0, out=img)
    boxes.sort(key=lambda b: (b[1], b[0]))
    return SyntheticImage(image_id, img, tuple(boxes))


def make_corpus(n_images: int = 20, seed: int = 0, **kwargs) -> list[SyntheticImage]:
    rng = np.random.default_rng(seed)
    return [make_image(rng, f"synthetic_{i:03d}", **kwargs) for i in range(n_images)]
