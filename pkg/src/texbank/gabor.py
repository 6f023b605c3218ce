"""Dyadic Gabor filter bank: planning, frequency-domain filtering, energies.

A bank for an image of width ``n_c`` places filters at dyadic radial center
frequencies ``2^k * sqrt(2)`` cycles/image-width.  The two lowest candidates
(``1*sqrt(2)`` and ``2*sqrt(2)``) are dropped as insensitive to texture, and
frequencies above ``(n_c/4)*sqrt(2)`` are dropped so the passband stays inside
the image.  With four orientations on a 512-wide image this yields the
standard 24-filter bank.

Filtering happens in the frequency domain: the analytic two-lobe frequency
response is sampled on the DFT grid, multiplied with the image spectrum, and
transformed back.  The equivalent spatial cosine-Gabor kernel is exposed for
verification; note that the frequency response is peak-normalized, so it
equals exactly twice the Fourier transform of the spatial kernel (the factor
comes from splitting the cosine into two complex exponentials).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from texbank.errors import ConfigError, DomainError, SizeError
from texbank.features import FeatureVector
from texbank.image import ZeroMeanImage

SQRT2 = math.sqrt(2.0)

DEFAULT_ORIENTATION_COUNT = 4
DEFAULT_FREQ_BANDWIDTH = 1.0          # octaves
DEFAULT_ANGULAR_BANDWIDTH = math.pi / 4   # 45 degrees


@dataclass(frozen=True)
class GaborFilterSpec:
    """One filter: center frequency (cycles/pixel), orientation, envelope."""

    f0: float
    theta: float
    sigma_x: float
    sigma_y: float
    b_f: float
    b_theta: float

    def __post_init__(self):
        if not (0.0 < self.f0 < 0.5):
            raise DomainError(f"center frequency {self.f0} outside (0, 0.5) cycles/pixel")
        if self.sigma_x <= 0 or self.sigma_y <= 0:
            raise DomainError("envelope sigmas must be positive")
        if not (0.0 <= self.theta < math.pi):
            raise DomainError(f"orientation {self.theta} outside [0, pi)")


@dataclass(frozen=True)
class BankConfig:
    """Full dyadic bank layout for a given image width.

    ``filters`` is ordered frequency-major: all orientations of the lowest
    retained frequency first, then the next frequency, and so on.
    """

    image_width: int
    orientation_count: int
    orientations: tuple[float, ...]         # radians
    radial_frequencies: tuple[float, ...]   # cycles/image-width
    filters: tuple[GaborFilterSpec, ...]
    circular: bool


def compute_envelope_sigmas(f0: float, b_f: float, b_theta: float) -> tuple[float, float]:
    """Gaussian envelope sigmas (pixels) from the -6 dB bandwidth settings.

    ``f0`` is in cycles/pixel, ``b_f`` in octaves, ``b_theta`` in radians.
    """
    if f0 <= 0:
        raise DomainError(f"center frequency must be positive, got {f0}")
    if b_f <= 0:
        raise DomainError(f"frequency bandwidth must be positive, got {b_f}")
    if not (0.0 < b_theta < math.pi):
        raise DomainError(f"orientation bandwidth must be in (0, pi), got {b_theta}")
    root_ln2 = math.sqrt(math.log(2.0))
    pow_bf = 2.0 ** b_f
    sigma_x = root_ln2 * (pow_bf + 1.0) / (SQRT2 * math.pi * f0 * (pow_bf - 1.0))
    sigma_y = root_ln2 / (SQRT2 * math.pi * f0 * math.tan(b_theta / 2.0))
    return sigma_x, sigma_y


def spatial_impulse_response(spec: GaborFilterSpec, x, y):
    """Cosine Gabor kernel value(s) at spatial offsets (x, y) in pixels.

    Coordinates rotate into the filter frame before the separable Gaussian
    envelope and the cosine carrier are evaluated.  Accepts scalars or
    broadcastable arrays.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    ct, st = math.cos(spec.theta), math.sin(spec.theta)
    xr = x * ct + y * st
    yr = -x * st + y * ct
    envelope = np.exp(-0.5 * ((xr / spec.sigma_x) ** 2 + (yr / spec.sigma_y) ** 2))
    carrier = np.cos(2.0 * math.pi * spec.f0 * xr)
    out = envelope * carrier / (2.0 * math.pi * spec.sigma_x * spec.sigma_y)
    return float(out) if out.ndim == 0 else out


def frequency_response(spec: GaborFilterSpec, u, v):
    """Two-lobe frequency response at (u, v) in cycles/pixel.

    The frequency plane rotates by the filter orientation before the two
    symmetric Gaussian lobes at +/- f0 are evaluated.  Peak value is ~1.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    ct, st = math.cos(spec.theta), math.sin(spec.theta)
    ur = u * ct + v * st
    vr = -u * st + v * ct
    two_pi_sq = 2.0 * math.pi ** 2
    sx2 = spec.sigma_x ** 2
    sy2 = spec.sigma_y ** 2
    lobe_pos = np.exp(-two_pi_sq * ((ur - spec.f0) ** 2 * sx2 + vr ** 2 * sy2))
    lobe_neg = np.exp(-two_pi_sq * ((ur + spec.f0) ** 2 * sx2 + vr ** 2 * sy2))
    out = lobe_pos + lobe_neg
    return float(out) if out.ndim == 0 else out


def dyadic_candidate_frequencies(n_c: int) -> tuple[float, ...]:
    """All dyadic candidates 2^k*sqrt(2), k = 0 .. log2(n_c/2)-1, before exclusions."""
    _require_pow2_width(n_c)
    k_count = int(math.log2(n_c // 2))
    return tuple((2.0 ** k) * SQRT2 for k in range(k_count))


def plan_bank(
    n_c: int,
    orientation_count: int = DEFAULT_ORIENTATION_COUNT,
    b_f: float = DEFAULT_FREQ_BANDWIDTH,
    b_theta: float = DEFAULT_ANGULAR_BANDWIDTH,
    circular: bool = True,
) -> BankConfig:
    """Lay out the dyadic bank for an image of width ``n_c`` pixels.

    Orientations are uniformly spaced by pi/orientation_count starting at 0.
    In circular mode both sigmas take the frequency-bandwidth-driven value so
    the stated octave bandwidth is preserved with an isotropic envelope.
    """
    _require_pow2_width(n_c)
    if orientation_count < 1:
        raise ConfigError(f"orientation count must be >= 1, got {orientation_count}")
    candidates = dyadic_candidate_frequencies(n_c)
    cap = (n_c / 4.0) * SQRT2
    retained = tuple(
        f for k, f in enumerate(candidates) if k >= 2 and f <= cap * (1.0 + 1e-12)
    )
    if not retained:
        raise ConfigError(f"image width {n_c} leaves no usable radial frequencies")
    orientations = tuple(a * math.pi / orientation_count for a in range(orientation_count))
    filters = []
    for freq in retained:
        f0 = freq / n_c
        sigma_x, sigma_y = compute_envelope_sigmas(f0, b_f, b_theta)
        if circular:
            sigma_y = sigma_x
        for theta in orientations:
            filters.append(
                GaborFilterSpec(
                    f0=f0, theta=theta, sigma_x=sigma_x, sigma_y=sigma_y,
                    b_f=b_f, b_theta=b_theta,
                )
            )
    return BankConfig(
        image_width=n_c,
        orientation_count=orientation_count,
        orientations=orientations,
        radial_frequencies=retained,
        filters=tuple(filters),
        circular=circular,
    )


def _require_pow2_width(n_c: int):
    if n_c < 16 or (n_c & (n_c - 1)) != 0:
        raise ConfigError(f"image width must be a power of two >= 16, got {n_c}")


def sampled_frequency_response(spec: GaborFilterSpec, side: int) -> np.ndarray:
    """Frequency response sampled on the (side x side) DFT grid.

    Grid frequencies follow the DFT convention (index/side below the Nyquist
    index, negative above).  The self-paired Nyquist row/column must carry
    symmetric gains for the filtered output to be real; everywhere else the
    symmetrizing average is a no-op because the analytic response is already
    point-symmetric.
    """
    freqs = np.fft.fftfreq(side)
    u = freqs[None, :]   # x frequency varies along columns
    v = freqs[:, None]   # y frequency varies along rows
    grid = frequency_response(spec, u, v)
    neg = (-np.arange(side)) % side
    return 0.5 * (grid + grid[np.ix_(neg, neg)])


@lru_cache(maxsize=2)
def _bank_response_stack(bank: BankConfig) -> np.ndarray:
    stack = np.empty((len(bank.filters), bank.image_width, bank.image_width))
    for i, spec in enumerate(bank.filters):
        stack[i] = sampled_frequency_response(spec, bank.image_width)
    stack.setflags(write=False)
    return stack


def apply_filter(img: ZeroMeanImage, spec: GaborFilterSpec) -> np.ndarray:
    """Filter the image in the frequency domain; returns |response| values.

    The image spectrum is multiplied by the sampled frequency response and
    transformed back; borders wrap circularly as implied by the DFT.
    """
    side = _require_square_pow2(img)
    spectrum = np.fft.fft2(img.values)
    filtered = np.fft.ifft2(spectrum * sampled_frequency_response(spec, side))
    return np.abs(filtered.real)


def energy_signature(resp: np.ndarray, k: int = 1) -> float:
    """Mean of |response|^k over the image: the l1 (k=1) or l2 (k=2) energy."""
    if k not in (1, 2):
        raise DomainError(f"energy norm k must be 1 or 2, got {k}")
    resp = np.abs(np.asarray(resp, dtype=np.float64))
    return float(np.mean(resp if k == 1 else resp * resp))


def bank_feature_names(bank: BankConfig) -> tuple[str, ...]:
    """Stable frequency-major feature names, e.g. ``gabor_f32sqrt2_o45``."""
    names = []
    for freq in bank.radial_frequencies:
        mult = round(freq / SQRT2)
        for theta in bank.orientations:
            deg = round(math.degrees(theta))
            names.append(f"gabor_f{mult}sqrt2_o{deg}")
    return tuple(names)


def gabor_features(img: ZeroMeanImage, bank: BankConfig, k: int = 1) -> FeatureVector:
    """One energy per bank filter, ordered frequency-major.

    The image spectrum is computed once and multiplied against the cached
    response grids of the whole bank.
    """
    if k not in (1, 2):
        raise DomainError(f"energy norm k must be 1 or 2, got {k}")
    side = _require_square_pow2(img)
    if side != bank.image_width:
        raise SizeError(
            f"image side {side} does not match bank width {bank.image_width}"
        )
    spectrum = np.fft.fft2(img.values)
    stack = _bank_response_stack(bank)
    energies = np.empty(len(bank.filters))
    for i in range(len(bank.filters)):
        resp = np.abs(np.fft.ifft2(spectrum * stack[i]).real)
        energies[i] = np.mean(resp if k == 1 else resp * resp)
    return FeatureVector(bank_feature_names(bank), energies)


def _require_square_pow2(img: ZeroMeanImage) -> int:
    h, w = img.values.shape
    if h != w or (h & (h - 1)) != 0:
        raise SizeError(f"expected square power-of-two image, got {h}x{w}")
    return h


def bank_to_dict(bank: BankConfig) -> dict:
    """JSON-ready description of the bank, frequencies in both unit systems."""
    return {
        "image_width": bank.image_width,
        "orientation_count": bank.orientation_count,
        "orientations_deg": [round(math.degrees(t), 10) for t in bank.orientations],
        "radial_frequencies_cycles_per_image_width": list(bank.radial_frequencies),
        "circular": bank.circular,
        "filters": [
            {
                "f0_cycles_per_image_width": spec.f0 * bank.image_width,
                "f0_cycles_per_pixel": spec.f0,
                "theta_deg": round(math.degrees(spec.theta), 10),
                "sigma_x": spec.sigma_x,
                "sigma_y": spec.sigma_y,
                "b_f_octaves": spec.b_f,
                "b_theta_deg": round(math.degrees(spec.b_theta), 10),
            }
            for spec in bank.filters
        ],
    }
