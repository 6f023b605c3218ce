# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled texture-matrix kernels: tight loops over quantized images."""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil

cnp.import_array()


def glcm_counts(const cnp.int32_t[:, ::1] codes, int levels, int dr, int dc):
    """Counts of ordered gray-level pairs at displacement (dr, dc)."""
    cdef Py_ssize_t h = codes.shape[0]
    cdef Py_ssize_t w = codes.shape[1]
    cdef Py_ssize_t r0 = -dr if dr < 0 else 0
    cdef Py_ssize_t r1 = h - (dr if dr > 0 else 0)
    cdef Py_ssize_t c0 = -dc if dc < 0 else 0
    cdef Py_ssize_t c1 = w - (dc if dc > 0 else 0)
    out = np.zeros((levels, levels), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] acc = out
    cdef Py_ssize_t r, c
    for r in range(r0, r1):
        for c in range(c0, c1):
            acc[codes[r, c], codes[r + dr, c + dc]] += 1
    return out


cdef inline void _walk_line(
    const cnp.int32_t[:, ::1] codes,
    cnp.int64_t[:, ::1] acc,
    Py_ssize_t r, Py_ssize_t c,
    Py_ssize_t step_r, Py_ssize_t step_c,
    Py_ssize_t h, Py_ssize_t w,
) noexcept:
    cdef cnp.int32_t cur = codes[r, c]
    cdef Py_ssize_t length = 1
    r += step_r
    c += step_c
    while 0 <= r < h and 0 <= c < w:
        if codes[r, c] == cur:
            length += 1
        else:
            acc[cur, length - 1] += 1
            cur = codes[r, c]
            length = 1
        r += step_r
        c += step_c
    acc[cur, length - 1] += 1


def rlm_counts(const cnp.int32_t[:, ::1] codes, int levels, int direction):
    """Run-length counts along one direction.

    direction: 0 = horizontal, 1 = 45 deg (anti-diagonal), 2 = vertical,
    3 = 135 deg (main diagonal).  Columns index run length - 1.
    """
    cdef Py_ssize_t h = codes.shape[0]
    cdef Py_ssize_t w = codes.shape[1]
    cdef Py_ssize_t maxlen = h if h > w else w
    out = np.zeros((levels, maxlen), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] acc = out
    cdef Py_ssize_t r, c
    if direction == 0:
        for r in range(h):
            _walk_line(codes, acc, r, 0, 0, 1, h, w)
    elif direction == 2:
        for c in range(w):
            _walk_line(codes, acc, 0, c, 1, 0, h, w)
    elif direction == 1:
        # anti-diagonals: walk up-right from the left column and bottom row
        for r in range(h):
            _walk_line(codes, acc, r, 0, -1, 1, h, w)
        for c in range(1, w):
            _walk_line(codes, acc, h - 1, c, -1, 1, h, w)
    elif direction == 3:
        # main diagonals: walk down-right from the top row and left column
        for c in range(w):
            _walk_line(codes, acc, 0, c, 1, 1, h, w)
        for r in range(1, h):
            _walk_line(codes, acc, r, 0, 1, 1, h, w)
    else:
        raise ValueError(f"direction must be 0..3, got {direction}")
    return out


def box_counts(const double[:, ::1] values, Py_ssize_t box, double height):
    """Sum over full (box x box) blocks of ceil(max/height)-ceil(min/height)+1."""
    cdef Py_ssize_t h = values.shape[0]
    cdef Py_ssize_t w = values.shape[1]
    cdef Py_ssize_t nr = h // box
    cdef Py_ssize_t nc = w // box
    cdef long long total = 0
    cdef Py_ssize_t bi, bj, r, c
    cdef double vmin, vmax, v
    for bi in range(nr):
        for bj in range(nc):
            vmin = values[bi * box, bj * box]
            vmax = vmin
            for r in range(bi * box, (bi + 1) * box):
                for c in range(bj * box, (bj + 1) * box):
                    v = values[r, c]
                    if v < vmin:
                        vmin = v
                    elif v > vmax:
                        vmax = v
            total += (<long long>ceil(vmax / height)
                      - <long long>ceil(vmin / height) + 1)
    return int(total)
