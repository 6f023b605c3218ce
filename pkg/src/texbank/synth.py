"""Seeded synthetic textures with analytically known properties.

These generators stand in for ground truth: gratings exercise the filter
bank's frequency/orientation selectivity, fractional Brownian surfaces carry
a known roughness (surface dimension 3 - H), the stationary random-field
texture has known interaction parameters, and the four-class grating corpus
is a desk-scale classification benchmark.  Everything is deterministic under
(seed, parameters).
"""

from __future__ import annotations

import math

import numpy as np

from texbank.errors import DomainError
from texbank.gabor import SQRT2, dyadic_candidate_frequencies

CORPUS_ORIENTATIONS_DEG = (0, 45, 90, 135)
CORPUS_NOISE_SIGMA = 20.0


def grating(
    side: int,
    frequency: float,
    orientation: float,
    phase: float = 0.0,
    snap_to_bin: bool = True,
) -> np.ndarray:
    """Cosine grating in [0, 255]: 127.5 * (1 + cos(2 pi f (x cos t + y sin t) / side + phase)).

    ``frequency`` is in cycles/image-width and ``orientation`` in radians.
    With ``snap_to_bin`` the 2-D frequency vector rounds to the nearest
    integer DFT bin so matched-filter checks see no spectral leakage.
    """
    if side < 1:
        raise DomainError(f"side must be positive, got {side}")
    if frequency < 0 or frequency >= side / 2:
        raise DomainError(
            f"frequency must be in [0, side/2) cycles/image-width, got {frequency}"
        )
    fx = frequency * math.cos(orientation)
    fy = frequency * math.sin(orientation)
    if snap_to_bin:
        fx = float(round(fx))
        fy = float(round(fy))
    x = np.arange(side, dtype=np.float64)[None, :]
    y = np.arange(side, dtype=np.float64)[:, None]
    wave = np.cos(2.0 * math.pi * (fx * x + fy * y) / side + phase)
    return 127.5 * (1.0 + wave)


def fbm_surface(side: int, hurst: float, seed: int) -> np.ndarray:
    """Fractional Brownian surface by spectral synthesis, scaled to [0, 255].

    A white-noise spectrum (i.i.d. complex Gaussian with Hermitian symmetry)
    is shaped by radial frequency^-(hurst+1), giving power ~ f^-(2H+2) and a
    surface of theoretical fractal dimension 3 - H.
    """
    if not (0.0 < hurst < 1.0):
        raise DomainError(f"Hurst exponent must be in (0, 1), got {hurst}")
    _require_pow2(side)
    rng = np.random.default_rng(seed)
    spectrum = np.fft.fft2(rng.standard_normal((side, side)))
    freqs = np.fft.fftfreq(side) * side
    radial = np.hypot(freqs[None, :], freqs[:, None])
    radial[0, 0] = 1.0
    shaping = radial ** (-(hurst + 1.0))
    shaping[0, 0] = 0.0
    surf = np.fft.ifft2(spectrum * shaping)
    if np.abs(surf.imag).max() >= 1e-9:
        raise AssertionError("spectral synthesis lost Hermitian symmetry")
    surf = surf.real
    lo, hi = surf.min(), surf.max()
    return (surf - lo) / (hi - lo) * 255.0


def white_noise(side: int, seed: int, sigma: float = 40.0, mean: float = 127.5) -> np.ndarray:
    """Seeded i.i.d. Gaussian intensity field (not clipped)."""
    rng = np.random.default_rng(seed)
    return rng.standard_normal((side, side)) * sigma + mean


def grf_texture(side: int, interactions: tuple[float, float, float, float], seed: int) -> np.ndarray:
    """Stationary second-order Markov texture with known interaction parameters.

    ``interactions`` are the (horizontal, vertical, main-diagonal,
    anti-diagonal) symmetric-pair coefficients; a white-noise spectrum is
    shaped by the corresponding conditional-autoregression spectral density,
    which sampled on the torus gives an exact stationary draw.  Output is
    min-max scaled to [0, 255].
    """
    _require_pow2(side)
    th_h, th_v, th_d1, th_d2 = interactions
    omega = 2.0 * math.pi * np.fft.fftfreq(side)
    wx = omega[None, :]
    wy = omega[:, None]
    denom = 1.0 - 2.0 * (
        th_h * np.cos(wx)
        + th_v * np.cos(wy)
        + th_d1 * np.cos(wx + wy)
        + th_d2 * np.cos(wx - wy)
    )
    if denom.min() <= 0:
        raise DomainError("interaction parameters violate stationarity (denominator <= 0)")
    rng = np.random.default_rng(seed)
    spectrum = np.fft.fft2(rng.standard_normal((side, side)))
    field = np.fft.ifft2(spectrum / np.sqrt(denom)).real
    lo, hi = field.min(), field.max()
    return (field - lo) / (hi - lo) * 255.0


def corpus_frequency(side: int) -> float:
    """Mid-bank radial frequency (cycles/image-width) for a given side."""
    candidates = dyadic_candidate_frequencies(side)
    cap = (side / 4.0) * SQRT2
    retained = [f for k, f in enumerate(candidates) if k >= 2 and f <= cap * (1 + 1e-12)]
    if not retained:
        raise DomainError(f"side {side} leaves no usable bank frequencies")
    return retained[len(retained) // 2]


def four_class_corpus(
    seed: int, per_class: int, side: int
) -> list[tuple[str, np.ndarray, str]]:
    """Labeled noisy gratings at four orientations, one class per orientation.

    Each sample gets a random phase and additive Gaussian noise (sigma 20
    intensity units), then clips to [0, 255] and rounds to uint8 so PNG
    round-trips are lossless.  Returns (sample id, uint8 image, label) rows.
    """
    if per_class < 4:
        raise DomainError(f"per_class must be >= 4, got {per_class}")
    _require_pow2(side)
    freq = corpus_frequency(side)
    rng = np.random.default_rng(seed)
    samples: list[tuple[str, np.ndarray, str]] = []
    for deg in CORPUS_ORIENTATIONS_DEG:
        label = f"theta{deg:03d}"
        for i in range(per_class):
            phase = rng.uniform(0.0, 2.0 * math.pi)
            clean = grating(side, freq, math.radians(deg), phase)
            noisy = clean + rng.standard_normal((side, side)) * CORPUS_NOISE_SIGMA
            img = np.clip(np.rint(noisy), 0, 255).astype(np.uint8)
            samples.append((f"{label}_s{i:03d}", img, label))
    return samples


def _require_pow2(side: int):
    if side < 2 or (side & (side - 1)) != 0:
        raise DomainError(f"side must be a power of two >= 2, got {side}")
