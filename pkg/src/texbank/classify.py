"""Gaussian Bayes classification with leave-one-out cross-validation.

The classifier is diagonal-covariance ("naive") Gaussian Bayes with class
priors taken from class frequencies and a small variance floor.  LOOCV fits
the feature standardizer and the model on each fold's n-1 training samples so
no information leaks from the held-out sample.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from texbank.errors import InsufficientDataError, SchemaError
from texbank.features import FeatureVector

VARIANCE_FLOOR = 1e-9


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix with labels and case identifiers for cross-validation.

    ``classes`` keeps first-appearance order; prediction ties break toward
    the earlier class.
    """

    ids: tuple[str, ...]
    features: np.ndarray = field(repr=False)
    labels: tuple[str, ...]
    case_ids: tuple[str, ...]
    feature_names: tuple[str, ...]
    classes: tuple[str, ...]

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        object.__setattr__(self, "features", feats)
        n = len(self.ids)
        if feats.shape != (n, len(self.feature_names)):
            raise SchemaError(
                f"feature matrix shape {feats.shape} does not match "
                f"{n} samples x {len(self.feature_names)} features"
            )
        if len(self.labels) != n or len(self.case_ids) != n:
            raise SchemaError("ids, labels and case_ids must have equal length")
        if not np.all(np.isfinite(feats)):
            raise SchemaError("feature matrix contains non-finite values")
        missing = set(self.labels) - set(self.classes)
        if missing:
            raise SchemaError(f"labels {sorted(missing)} missing from class list")

    @classmethod
    def from_samples(
        cls, samples: Iterable[tuple[str, FeatureVector, str, str]]
    ) -> "LabeledDataset":
        samples = list(samples)
        if not samples:
            raise SchemaError("dataset has no samples")
        names = samples[0][1].names
        for sid, vec, _, _ in samples:
            if vec.names != names:
                raise SchemaError(f"sample {sid!r} has mismatched feature names")
        classes: list[str] = []
        for _, _, label, _ in samples:
            if label not in classes:
                classes.append(label)
        return cls(
            ids=tuple(s[0] for s in samples),
            features=np.stack([s[1].values for s in samples]),
            labels=tuple(s[2] for s in samples),
            case_ids=tuple(s[3] for s in samples),
            feature_names=names,
            classes=tuple(classes),
        )

    def __len__(self) -> int:
        return len(self.ids)

    def take(self, index: np.ndarray) -> "LabeledDataset":
        """Row subset preserving the full class list."""
        idx = np.asarray(index)
        return LabeledDataset(
            ids=tuple(self.ids[i] for i in idx),
            features=self.features[idx],
            labels=tuple(self.labels[i] for i in idx),
            case_ids=tuple(self.case_ids[i] for i in idx),
            feature_names=self.feature_names,
            classes=self.classes,
        )


@dataclass(frozen=True)
class Scaler:
    """Per-feature mean/std fitted on training data; zero spreads floor to 1."""

    mean: np.ndarray = field(repr=False)
    std: np.ndarray = field(repr=False)

    def transform(self, features: np.ndarray) -> np.ndarray:
        return (np.asarray(features, dtype=np.float64) - self.mean) / self.std


@dataclass(frozen=True)
class GaussianBayesModel:
    classes: tuple[str, ...]
    priors: np.ndarray = field(repr=False)
    means: np.ndarray = field(repr=False)      # (classes, features)
    variances: np.ndarray = field(repr=False)  # (classes, features), floored
    feature_names: tuple[str, ...]


@dataclass(frozen=True)
class ConfusionMatrix:
    """Per-class counts with rows = true class, columns = predicted class."""

    classes: tuple[str, ...]
    counts: np.ndarray = field(repr=False)  # (classes, classes) int64

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        object.__setattr__(self, "counts", counts)
        c = len(self.classes)
        if counts.shape != (c, c):
            raise SchemaError(f"counts shape {counts.shape} for {c} classes")

    @property
    def per_class_accuracy(self) -> np.ndarray:
        row_sums = self.counts.sum(axis=1)
        diag = np.diag(self.counts)
        with np.errstate(invalid="ignore", divide="ignore"):
            acc = np.where(row_sums > 0, diag / row_sums, 0.0)
        return acc

    @property
    def total_accuracy(self) -> float:
        total = int(self.counts.sum())
        if total == 0:
            return 0.0
        return float(np.trace(self.counts)) / total


def standardize_fit(train: LabeledDataset) -> tuple[Scaler, LabeledDataset]:
    """Fit a per-feature standardizer on the dataset and apply it."""
    feats = train.features
    mean = feats.mean(axis=0)
    std = feats.std(axis=0, ddof=0)
    std = np.where(std > 0, std, 1.0)
    scaler = Scaler(mean=mean, std=std)
    transformed = LabeledDataset(
        ids=train.ids,
        features=scaler.transform(feats),
        labels=train.labels,
        case_ids=train.case_ids,
        feature_names=train.feature_names,
        classes=train.classes,
    )
    return scaler, transformed


def fit(
    train: LabeledDataset,
    variance_floor: float = VARIANCE_FLOOR,
    allow_singleton_classes: bool = False,
) -> GaussianBayesModel:
    """Class priors plus per-class diagonal Gaussian parameters.

    Variances use the unbiased (n-1) estimator and are floored so the
    log-density never degenerates.  With ``allow_singleton_classes`` (used by
    the LOOCV folds, where the held-out sample's class transiently shrinks to
    one member) a single-sample class takes the global per-feature variance
    of the training fold instead of an undefined estimate.
    """
    labels = np.asarray(train.labels)
    n_classes = len(train.classes)
    n_features = len(train.feature_names)
    priors = np.empty(n_classes)
    means = np.empty((n_classes, n_features))
    variances = np.empty((n_classes, n_features))
    global_var = None
    for ci, cls_name in enumerate(train.classes):
        rows = train.features[labels == cls_name]
        if rows.shape[0] < 1 or (rows.shape[0] < 2 and not allow_singleton_classes):
            raise InsufficientDataError(
                f"class {cls_name!r} has {rows.shape[0]} sample(s); need >= 2"
            )
        priors[ci] = rows.shape[0] / len(train)
        means[ci] = rows.mean(axis=0)
        if rows.shape[0] >= 2:
            variances[ci] = np.maximum(rows.var(axis=0, ddof=1), variance_floor)
        else:
            if global_var is None:
                global_var = train.features.var(axis=0, ddof=0)
            variances[ci] = np.maximum(global_var, variance_floor)
    return GaussianBayesModel(
        classes=train.classes,
        priors=priors,
        means=means,
        variances=variances,
        feature_names=train.feature_names,
    )


def _log_posteriors(model: GaussianBayesModel, rows: np.ndarray) -> np.ndarray:
    x = rows[:, None, :]  # (n, 1, f)
    log_density = -0.5 * (
        np.log(2.0 * np.pi * model.variances)
        + (x - model.means) ** 2 / model.variances
    ).sum(axis=2)
    log_post = np.log(model.priors) + log_density
    log_norm = np.logaddexp.reduce(log_post, axis=1, keepdims=True)
    return log_post - log_norm


def predict(model: GaussianBayesModel, x: FeatureVector) -> tuple[str, np.ndarray]:
    """Most probable class and the posterior over classes (model order).

    Ties break toward the class declared first.
    """
    if x.names != model.feature_names:
        raise SchemaError("feature names do not match the fitted model")
    log_post = _log_posteriors(model, x.values[None, :])[0]
    posteriors = np.exp(log_post)
    return model.classes[int(np.argmax(log_post))], posteriors


def loocv(data: LabeledDataset) -> ConfusionMatrix:
    """Leave-one-out cross-validation with per-fold standardization.

    The scaler and the model are refit on every fold's n-1 training samples,
    so nothing about the held-out sample leaks into its own prediction.
    """
    n = len(data)
    labels = np.asarray(data.labels)
    for cls_name in data.classes:
        if int((labels == cls_name).sum()) < 2:
            raise InsufficientDataError(
                f"class {cls_name!r} needs >= 2 samples for leave-one-out"
            )
    class_index = {c: i for i, c in enumerate(data.classes)}
    counts = np.zeros((len(data.classes), len(data.classes)), dtype=np.int64)
    all_idx = np.arange(n)
    for held in range(n):
        train = data.take(all_idx[all_idx != held])
        scaler, train_std = standardize_fit(train)
        model = fit(train_std, allow_singleton_classes=True)
        row = scaler.transform(data.features[held][None, :])
        log_post = _log_posteriors(model, row)[0]
        predicted = model.classes[int(np.argmax(log_post))]
        counts[class_index[data.labels[held]], class_index[predicted]] += 1
    return ConfusionMatrix(classes=data.classes, counts=counts)


def render_report(cm: ConfusionMatrix) -> str:
    """Text table with per-class and total accuracy, percentages to 2 dp."""
    out = io.StringIO()
    header = ["class"] + list(cm.classes) + ["total"]
    acc = ["accuracy (%)"] + [
        f"{100.0 * a:.2f}" for a in cm.per_class_accuracy
    ] + [f"{100.0 * cm.total_accuracy:.2f}"]
    widths = [max(len(h), len(a)) for h, a in zip(header, acc)]
    out.write("  ".join(h.rjust(w) for h, w in zip(header, widths)) + "\n")
    out.write("  ".join(a.rjust(w) for a, w in zip(acc, widths)) + "\n")
    out.write("\nconfusion counts (rows = true, columns = predicted)\n")
    name_w = max(len(c) for c in cm.classes)
    col_w = max(6, name_w)
    out.write(" " * (name_w + 2) + "  ".join(c.rjust(col_w) for c in cm.classes) + "\n")
    for i, cls_name in enumerate(cm.classes):
        row = "  ".join(str(int(v)).rjust(col_w) for v in cm.counts[i])
        out.write(f"{cls_name.rjust(name_w)}  {row}\n")
    return out.getvalue()


def confusion_to_csv(cm: ConfusionMatrix) -> str:
    """Counts matrix as CSV with a header row and per-row true-class labels."""
    lines = ["true\\predicted," + ",".join(cm.classes)]
    for i, cls_name in enumerate(cm.classes):
        lines.append(cls_name + "," + ",".join(str(int(v)) for v in cm.counts[i]))
    lines.append(
        "total_accuracy," + f"{100.0 * cm.total_accuracy:.2f}%"
    )
    return "\n".join(lines) + "\n"
