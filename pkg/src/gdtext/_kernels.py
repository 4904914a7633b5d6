"""Compiled inner loops: sliding-window extrema and connected-component labeling."""

from __future__ import annotations

import numba
import numpy as np

_jit = numba.njit(cache=True, nogil=True)


@_jit
def sliding_minmax_rows(a, half):
    """Per-row min and max over the window ``[x - half, x + half]`` clipped to the row.

    Two monotonic deques per row keep candidate indices with values increasing
    (for the min) or decreasing (for the max), so each row costs O(width).
    """
    h, w = a.shape
    mins = np.empty((h, w), dtype=a.dtype)
    maxs = np.empty((h, w), dtype=a.dtype)
    qmin = np.empty(w, dtype=np.int64)
    qmax = np.empty(w, dtype=np.int64)
    for y in range(h):
        row = a[y]
        min_head = 0
        min_tail = 0
        max_head = 0
        max_tail = 0
        for r in range(w + half):
            if r < w:
                v = row[r]
                while min_tail > min_head and row[qmin[min_tail - 1]] >= v:
                    min_tail -= 1
                qmin[min_tail] = r
                min_tail += 1
                while max_tail > max_head and row[qmax[max_tail - 1]] <= v:
                    max_tail -= 1
                qmax[max_tail] = r
                max_tail += 1
            x = r - half
            if x < 0:
                continue
            lo = x - half
            while qmin[min_head] < lo:
                min_head += 1
            while qmax[max_head] < lo:
                max_head += 1
            mins[y, x] = row[qmin[min_head]]
            maxs[y, x] = row[qmax[max_head]]
    return mins, maxs


@_jit
def sliding_max_rows_u8(a, half):
    """Row-wise sliding maximum of a uint8 raster, window clipped at the borders."""
    h, w = a.shape
    out = np.empty((h, w), dtype=np.uint8)
    q = np.empty(w, dtype=np.int64)
    for y in range(h):
        row = a[y]
        head = 0
        tail = 0
        for r in range(w + half):
            if r < w:
                v = row[r]
                while tail > head and row[q[tail - 1]] <= v:
                    tail -= 1
                q[tail] = r
                tail += 1
            x = r - half
            if x < 0:
                continue
            while q[head] < x - half:
                head += 1
            out[y, x] = row[q[head]]
    return out


@_jit
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    # path compression
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@_jit
def _union(parent, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra < rb:
        parent[rb] = ra
    elif rb < ra:
        parent[ra] = rb
    return min(ra, rb)


@_jit
def label8(mask):
    """Two-pass 8-connected labeling with union-find.

    Returns ``(labels, count)``; labels run 1..count in raster order of each
    component's first pixel, background is 0.
    """
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    parent = np.empty(h * w // 2 + 2, dtype=np.int32)
    parent[0] = 0
    next_label = 1
    for y in range(h):
        for x in range(w):
            if not mask[y, x]:
                continue
            cur = 0
            # already-visited neighbors: W, NW, N, NE
            if x > 0 and labels[y, x - 1]:
                cur = labels[y, x - 1]
            if y > 0:
                for dx in (-1, 0, 1):
                    nx = x + dx
                    if 0 <= nx < w and labels[y - 1, nx]:
                        n = labels[y - 1, nx]
                        if cur == 0:
                            cur = n
                        elif n != cur:
                            cur = _union(parent, cur, n)
            if cur == 0:
                if next_label >= parent.shape[0]:
                    grown = np.empty(parent.shape[0] * 2, dtype=np.int32)
                    grown[: parent.shape[0]] = parent
                    parent = grown
                parent[next_label] = next_label
                cur = next_label
                next_label += 1
            labels[y, x] = cur
    # resolve roots and renumber densely in raster order
    remap = np.zeros(next_label, dtype=np.int32)
    count = 0
    for i in range(1, next_label):
        r = _find(parent, i)
        if r == i:
            count += 1
            remap[i] = count
    for i in range(1, next_label):
        remap[i] = remap[_find(parent, i)]
    for y in range(h):
        for x in range(w):
            if labels[y, x]:
                labels[y, x] = remap[labels[y, x]]
    return labels, count
