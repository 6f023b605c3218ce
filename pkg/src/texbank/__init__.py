"""Multiresolution Gabor-bank texture features, fixed-resolution signatures,
and Gaussian-Bayes leave-one-out classification."""

from texbank.classify import (
    ConfusionMatrix,
    GaussianBayesModel,
    LabeledDataset,
    fit,
    loocv,
    predict,
    render_report,
    standardize_fit,
)
from texbank.features import FeatureVector, fuse
from texbank.fixedres import (
    QuantizedImage,
    fractal_dimension,
    glcm_features,
    gmrf_features,
    quantize,
    rlm_features,
)
from texbank.gabor import (
    BankConfig,
    GaborFilterSpec,
    apply_filter,
    compute_envelope_sigmas,
    energy_signature,
    frequency_response,
    gabor_features,
    plan_bank,
    spatial_impulse_response,
)
from texbank.image import (
    ZeroMeanImage,
    extract_channel,
    load_image,
    pad_to_pow2,
    subtract_mean,
)
from texbank.pipeline import RunConfig, extract_features, read_manifest

__version__ = "0.1.0"

__all__ = [
    "BankConfig",
    "ConfusionMatrix",
    "FeatureVector",
    "GaborFilterSpec",
    "GaussianBayesModel",
    "LabeledDataset",
    "QuantizedImage",
    "RunConfig",
    "ZeroMeanImage",
    "apply_filter",
    "compute_envelope_sigmas",
    "energy_signature",
    "extract_channel",
    "extract_features",
    "fit",
    "fractal_dimension",
    "frequency_response",
    "fuse",
    "gabor_features",
    "glcm_features",
    "gmrf_features",
    "load_image",
    "loocv",
    "pad_to_pow2",
    "plan_bank",
    "predict",
    "quantize",
    "read_manifest",
    "render_report",
    "rlm_features",
    "spatial_impulse_response",
    "standardize_fit",
    "subtract_mean",
    "__version__",
]
