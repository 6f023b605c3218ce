"""Pure-numpy texture-matrix kernels (fallback for the compiled core)."""

import numpy as np


def glcm_counts(codes, levels, dr, dc):
    """Counts of ordered gray-level pairs at displacement (dr, dc)."""
    codes = np.asarray(codes)
    h, w = codes.shape
    r0, r1 = max(0, -dr), h - max(0, dr)
    c0, c1 = max(0, -dc), w - max(0, dc)
    out = np.zeros((levels, levels), dtype=np.int64)
    if r1 <= r0 or c1 <= c0:
        return out
    a = codes[r0:r1, c0:c1].ravel().astype(np.int64)
    b = codes[r0 + dr:r1 + dr, c0 + dc:c1 + dc].ravel().astype(np.int64)
    flat = np.bincount(a * levels + b, minlength=levels * levels)
    return flat.reshape(levels, levels).astype(np.int64)


def _count_runs(line, acc):
    n = line.size
    if n == 0:
        return
    breaks = np.flatnonzero(np.diff(line)) + 1
    starts = np.concatenate(([0], breaks))
    ends = np.concatenate((breaks, [n]))
    lengths = ends - starts
    np.add.at(acc, (line[starts], lengths - 1), 1)


def rlm_counts(codes, levels, direction):
    """Run-length counts along one direction.

    direction: 0 = horizontal, 1 = 45 deg (anti-diagonal), 2 = vertical,
    3 = 135 deg (main diagonal).  Columns index run length - 1.
    """
    codes = np.asarray(codes)
    h, w = codes.shape
    acc = np.zeros((levels, max(h, w)), dtype=np.int64)
    if direction == 0:
        for r in range(h):
            _count_runs(codes[r, :], acc)
    elif direction == 2:
        for c in range(w):
            _count_runs(codes[:, c], acc)
    elif direction == 1:
        flipped = np.fliplr(codes)
        for off in range(-(h - 1), w):
            _count_runs(np.diagonal(flipped, offset=off), acc)
    elif direction == 3:
        for off in range(-(h - 1), w):
            _count_runs(np.diagonal(codes, offset=off), acc)
    else:
        raise ValueError(f"direction must be 0..3, got {direction}")
    return acc


def box_counts(values, box, height):
    """Sum over full (box x box) blocks of ceil(max/height)-ceil(min/height)+1."""
    values = np.asarray(values, dtype=np.float64)
    h, w = values.shape
    nr, nc = h // box, w // box
    blocks = values[:nr * box, :nc * box].reshape(nr, box, nc, box)
    bmax = blocks.max(axis=(1, 3))
    bmin = blocks.min(axis=(1, 3))
    counts = (
        np.ceil(bmax / height).astype(np.int64)
        - np.ceil(bmin / height).astype(np.int64)
        + 1
    )
    return int(counts.sum())
