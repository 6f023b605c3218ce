"""Fixed-resolution texture signatures: fractal dimension, GMRF, GLCM, RLM.

These complement the multiresolution filter-bank energies: the fractal
dimension summarizes surface roughness, the Gaussian Markov random field
captures local pixel dependence, and the co-occurrence / run-length matrices
carry second-order and run statistics of the quantized image.

The matrix accumulation loops run on the compiled kernel backend when it is
available (see ``texbank.kernels``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from texbank import kernels
from texbank.errors import DegenerateError, DomainError, SingularError, SizeError
from texbank.features import FeatureVector, fuse  # noqa: F401  (fuse re-exported)

GLCM_FEATURE_NAMES = (
    "glcm_contrast",
    "glcm_correlation",
    "glcm_energy",
    "glcm_homogeneity",
    "glcm_entropy",
    "glcm_dissimilarity",
)

RLM_FEATURE_NAMES = (
    "rlm_sre",
    "rlm_lre",
    "rlm_gln",
    "rlm_rln",
    "rlm_rp",
)

GMRF_FEATURE_NAMES = (
    "gmrf_horiz",
    "gmrf_vert",
    "gmrf_diag_main",
    "gmrf_diag_anti",
    "gmrf_resvar",
)

# (row, col) displacement per orientation in degrees, distance 1
_ORIENT_OFFSETS = {0: (0, 1), 45: (-1, 1), 90: (-1, 0), 135: (-1, -1)}
_ORIENT_RUN_DIRECTIONS = {0: 0, 45: 1, 90: 2, 135: 3}

DEFAULT_ORIENTATIONS = (0, 45, 90, 135)


@dataclass(frozen=True)
class QuantizedImage:
    """Gray levels binned to integers in [0, levels)."""

    values: np.ndarray = field(repr=False)
    levels: int

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.int32)
        object.__setattr__(self, "values", vals)
        if self.levels < 2:
            raise DomainError(f"need at least 2 levels, got {self.levels}")
        if vals.size and (vals.min() < 0 or vals.max() >= self.levels):
            raise DomainError("quantized values outside [0, levels)")


def quantize(gray: np.ndarray, levels: int) -> QuantizedImage:
    """Linear min-max binning into ``levels`` integer gray levels.

    A constant image maps everywhere to level 0.
    """
    if levels < 2:
        raise DomainError(f"need at least 2 levels, got {levels}")
    vals = np.asarray(gray, dtype=np.float64)
    if vals.ndim != 2 or vals.size == 0:
        raise DomainError("expected a nonempty 2-D gray image")
    lo = vals.min()
    hi = vals.max()
    if hi == lo:
        codes = np.zeros(vals.shape, dtype=np.int32)
    else:
        scaled = (vals - lo) / (hi - lo) * levels
        codes = np.minimum(scaled.astype(np.int32), levels - 1)
    return QuantizedImage(codes, levels)


def fractal_dimension(gray: np.ndarray) -> float:
    """Differential box-counting roughness estimate, clamped to [2, 3].

    Boxes of side s (s = 2, 4, ..., side/4) tile the image plane; each column
    of boxes counts ceil(max/h) - ceil(min/h) + 1 height cells with
    h = s * range / side.  The estimate is the least-squares slope of
    log N(s) against log(1/s).  A constant image comes out at exactly 2.
    """
    vals = np.ascontiguousarray(gray, dtype=np.float64)
    if vals.ndim != 2 or vals.shape[0] != vals.shape[1]:
        raise SizeError(f"expected a square image, got shape {vals.shape}")
    side = vals.shape[0]
    if side < 8:
        raise SizeError(f"side must be >= 8, got {side}")
    sizes = []
    s = 2
    while s <= side // 4:
        sizes.append(s)
        s *= 2
    if len(sizes) < 3:
        raise DegenerateError(
            f"side {side} allows only {len(sizes)} box sizes; need >= 3"
        )
    vrange = float(vals.max() - vals.min())
    if vrange == 0.0:
        return 2.0  # flat surface: one box per column at every scale
    log_counts = []
    for s in sizes:
        h = s * vrange / side
        log_counts.append(math.log(kernels.box_counts(vals, s, h)))
    x = np.log(1.0 / np.asarray(sizes, dtype=np.float64))
    slope = float(np.polyfit(x, np.asarray(log_counts), 1)[0])
    return min(3.0, max(2.0, slope))


def gmrf_features(gray: np.ndarray) -> FeatureVector:
    """Second-order GMRF interaction parameters plus residual variance.

    Each interior pixel is regressed on the sums of its four symmetric
    neighbor pairs (horizontal, vertical, both diagonals) after mean removal;
    the least-squares coefficients and the mean squared residual form the
    five features.
    """
    vals = np.asarray(gray, dtype=np.float64)
    if vals.ndim != 2 or vals.shape[0] < 5 or vals.shape[1] < 5:
        raise SizeError(f"need at least a 5x5 image, got shape {vals.shape}")
    y = vals - vals.mean()
    center = y[1:-1, 1:-1].ravel()
    pairs = np.stack(
        [
            (y[1:-1, :-2] + y[1:-1, 2:]).ravel(),   # horizontal
            (y[:-2, 1:-1] + y[2:, 1:-1]).ravel(),   # vertical
            (y[:-2, :-2] + y[2:, 2:]).ravel(),      # main diagonal
            (y[:-2, 2:] + y[2:, :-2]).ravel(),      # anti diagonal
        ],
        axis=1,
    )
    theta, _, rank, _ = np.linalg.lstsq(pairs, center, rcond=None)
    if rank < 4:
        raise SingularError(f"normal equations rank {rank} < 4 (constant image?)")
    resid = center - pairs @ theta
    resvar = float(resid @ resid) / center.size
    return FeatureVector(GMRF_FEATURE_NAMES, np.append(theta, resvar))


def glcm_features(
    img: QuantizedImage,
    distance: int = 1,
    orientations: tuple[int, ...] = DEFAULT_ORIENTATIONS,
) -> FeatureVector:
    """Haralick-style statistics of the pooled symmetric co-occurrence matrix.

    Pair counts from all requested orientations accumulate into a single
    matrix which is then symmetrized and normalized.  Entropy uses the
    natural logarithm with 0*log(0) = 0; correlation of a degenerate
    (zero-variance) matrix is defined as 0.
    """
    offsets = _resolve_orientations(orientations)
    if distance < 1:
        raise DomainError(f"distance must be >= 1, got {distance}")
    codes = img.values
    levels = img.levels
    counts = np.zeros((levels, levels), dtype=np.int64)
    for dr, dc in offsets:
        counts += kernels.glcm_counts(codes, levels, dr * distance, dc * distance)
    counts = counts + counts.T
    total = counts.sum()
    if total == 0:
        raise SizeError("no valid pixel pairs for the requested displacement")
    p = counts / float(total)

    idx = np.arange(levels, dtype=np.float64)
    i = idx[:, None]
    j = idx[None, :]
    diff = i - j
    contrast = float((p * diff**2).sum())
    dissimilarity = float((p * np.abs(diff)).sum())
    homogeneity = float((p / (1.0 + diff**2)).sum())
    energy = float((p * p).sum())
    nz = p[p > 0]
    entropy = float(-(nz * np.log(nz)).sum())
    marg = p.sum(axis=1)  # symmetric: row and column marginals coincide
    mu = float((idx * marg).sum())
    var = float(((idx - mu) ** 2 * marg).sum())
    if var > 0:
        correlation = float(((i - mu) * (j - mu) * p).sum() / var)
    else:
        correlation = 0.0
    return FeatureVector(
        GLCM_FEATURE_NAMES,
        np.array([contrast, correlation, energy, homogeneity, entropy, dissimilarity]),
    )


def rlm_features(
    img: QuantizedImage,
    orientations: tuple[int, ...] = DEFAULT_ORIENTATIONS,
) -> FeatureVector:
    """Classic run-length statistics of the orientation-summed run matrix.

    Emits short-run emphasis, long-run emphasis, gray-level nonuniformity,
    run-length nonuniformity and run percentage.  Run percentage is
    normalized by pixels x orientations so it stays in (0, 1] for the
    pooled matrix.
    """
    directions = [_ORIENT_RUN_DIRECTIONS[o] for o in _validate_orientations(orientations)]
    codes = img.values
    levels = img.levels
    rlm = np.zeros((levels, max(codes.shape)), dtype=np.int64)
    for d in directions:
        rlm += kernels.rlm_counts(codes, levels, d)
    n_runs = float(rlm.sum())
    lengths = np.arange(1, rlm.shape[1] + 1, dtype=np.float64)
    sre = float((rlm / lengths**2).sum() / n_runs)
    lre = float((rlm * lengths**2).sum() / n_runs)
    gln = float((rlm.sum(axis=1).astype(np.float64) ** 2).sum() / n_runs)
    rln = float((rlm.sum(axis=0).astype(np.float64) ** 2).sum() / n_runs)
    rp = n_runs / (codes.size * len(directions))
    return FeatureVector(RLM_FEATURE_NAMES, np.array([sre, lre, gln, rln, rp]))


def run_length_matrix(img: QuantizedImage, orientation: int) -> np.ndarray:
    """Raw run-length counts for a single orientation (rows = gray level)."""
    [o] = _validate_orientations((orientation,))
    return kernels.rlm_counts(img.values, img.levels, _ORIENT_RUN_DIRECTIONS[o])


def _validate_orientations(orientations) -> tuple[int, ...]:
    orients = tuple(orientations)
    if not orients:
        raise DomainError("need at least one orientation")
    for o in orients:
        if o not in _ORIENT_OFFSETS:
            raise DomainError(f"orientation must be one of {sorted(_ORIENT_OFFSETS)}, got {o}")
    if len(set(orients)) != len(orients):
        raise DomainError("orientations must be unique")
    return orients


def _resolve_orientations(orientations) -> list[tuple[int, int]]:
    return [_ORIENT_OFFSETS[o] for o in _validate_orientations(orientations)]
