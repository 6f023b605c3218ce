"""Extraction pipeline: manifests, run configuration, feature tables.

A manifest CSV lists the images with their class labels; the pipeline loads
each image, projects the configured color channel, optionally applies a
nuclei mask, and runs the configured extractor fusion.  Feature tables are
plain CSV with a header row, stable column order and 12-significant-digit
values so runs reproduce across platforms.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from functools import partial
from pathlib import Path

import numpy as np

from texbank import fixedres, gabor, image
from texbank.classify import LabeledDataset
from texbank.errors import ConfigError, IoError, SchemaError, SizeError, TexbankError
from texbank.features import FeatureVector, fuse

EXTRACTORS = ("gabor", "fd", "gmrf", "glcm", "rlm")

FLOAT_FORMAT = "{:.12g}"


@dataclass(frozen=True)
class RunConfig:
    """Extraction settings; the defaults reproduce the reference setup
    (blue channel, 4 orientations, 1-octave bandwidth, 45-degree angular
    bandwidth, circular envelope, l1 energy)."""

    channel: str = "blue"
    orientation_count: int = 4
    freq_bandwidth_octaves: float = 1.0
    angular_bandwidth_deg: float = 45.0
    circular: bool = True
    energy_norm: int = 1
    glcm_levels: int = 64
    glcm_distance: int = 1
    rlm_levels: int = 16
    fusion: tuple[str, ...] = ("gabor",)
    mask_dir: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "fusion", tuple(self.fusion))
        if self.channel not in image.CHANNELS:
            raise ConfigError(f"unknown channel {self.channel!r}")
        if not self.fusion:
            raise ConfigError("fusion list must not be empty")
        unknown = [name for name in self.fusion if name not in EXTRACTORS]
        if unknown:
            raise ConfigError(
                f"unknown extractor(s) {unknown}; available: {list(EXTRACTORS)}"
            )
        if len(set(self.fusion)) != len(self.fusion):
            raise ConfigError("fusion list contains duplicates")
        if self.energy_norm not in (1, 2):
            raise ConfigError(f"energy_norm must be 1 or 2, got {self.energy_norm}")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        path = Path(path)
        if not path.is_file():
            raise IoError(f"no such config file: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config root must be a JSON object in {path}")
        return cls.from_dict(data)

    def bank_for_side(self, side: int) -> gabor.BankConfig:
        return gabor.plan_bank(
            side,
            orientation_count=self.orientation_count,
            b_f=self.freq_bandwidth_octaves,
            b_theta=math.radians(self.angular_bandwidth_deg),
            circular=self.circular,
        )


@dataclass(frozen=True)
class ManifestRow:
    path: Path
    label: str
    case_id: str


def read_manifest(path) -> list[ManifestRow]:
    """Parse a manifest CSV (columns: path, label, optional case_id).

    Relative image paths resolve against the manifest's directory.
    """
    path = Path(path)
    if not path.is_file():
        raise IoError(f"no such manifest: {path}")
    base = path.parent
    rows: list[ManifestRow] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        if "path" not in header or "label" not in header:
            raise SchemaError(f"manifest {path} needs 'path' and 'label' columns")
        for record in reader:
            img_path = (record.get("path") or "").strip()
            label = (record.get("label") or "").strip()
            case_id = (record.get("case_id") or "").strip()
            if not img_path:
                raise SchemaError(f"manifest {path} has a row with an empty path")
            if not label:
                raise SchemaError(f"manifest {path}: empty label for {img_path}")
            resolved = Path(img_path)
            if not resolved.is_absolute():
                resolved = base / resolved
            rows.append(ManifestRow(path=resolved, label=label, case_id=case_id))
    if not rows:
        raise SchemaError(f"manifest {path} has no rows")
    paths = [str(r.path) for r in rows]
    if len(set(paths)) != len(paths):
        raise SchemaError(f"manifest {path} lists duplicate paths")
    return rows


def _sample_ids(rows: list[ManifestRow]) -> list[str]:
    stems = [r.path.stem for r in rows]
    if len(set(stems)) == len(stems):
        return stems
    return [r.path.as_posix() for r in rows]


def _extract_row(row: ManifestRow, sample_id: str, config: RunConfig, side: int) -> FeatureVector:
    try:
        rgb = image.load_image(row.path)
        gray = image.extract_channel(rgb, config.channel)
        mask = None
        if config.mask_dir is not None:
            mask = image.load_mask(Path(config.mask_dir) / row.path.name, gray.shape)
        gray_fixed = gray if mask is None else image.apply_mask(gray, mask)
        zero_mean = image.pad_to_pow2(image.subtract_mean(gray, mask))
        if zero_mean.width != side:
            raise SizeError(
                f"padded side {zero_mean.width} differs from expected {side}"
            )
        parts = []
        for name in config.fusion:
            if name == "gabor":
                bank = config.bank_for_side(side)
                parts.append(gabor.gabor_features(zero_mean, bank, config.energy_norm))
            elif name == "fd":
                parts.append(
                    FeatureVector(("fd",), np.array([fixedres.fractal_dimension(gray_fixed)]))
                )
            elif name == "gmrf":
                parts.append(fixedres.gmrf_features(gray_fixed))
            elif name == "glcm":
                q = fixedres.quantize(gray_fixed, config.glcm_levels)
                parts.append(fixedres.glcm_features(q, distance=config.glcm_distance))
            elif name == "rlm":
                q = fixedres.quantize(gray_fixed, config.rlm_levels)
                parts.append(fixedres.rlm_features(q))
        return fuse(parts)
    except TexbankError as exc:
        raise type(exc)(f"sample {sample_id!r}: {exc}") from exc


def _padded_side(row: ManifestRow, config: RunConfig) -> int:
    rgb = image.load_image(row.path)
    gray = image.extract_channel(rgb, config.channel)
    side = 1
    while side < max(gray.shape):
        side *= 2
    return side


def extract_features(
    manifest_rows: list[ManifestRow], config: RunConfig, jobs: int = 1
) -> LabeledDataset:
    """Run the configured fusion over every manifest row, in manifest order.

    With jobs > 1, samples are dispatched to a process pool; results are
    reassembled in manifest order so the output is independent of scheduling.
    """
    if not manifest_rows:
        raise SchemaError("no samples to extract")
    ids = _sample_ids(manifest_rows)
    side = _padded_side(manifest_rows[0], config)
    worker = partial(_extract_one_indexed, config=config, side=side)
    tasks = list(zip(manifest_rows, ids))
    if jobs <= 1:
        vectors = [worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            vectors = list(pool.map(worker, tasks, chunksize=1))
    samples = [
        (sid, vec, row.label, row.case_id or sid)
        for (row, sid), vec in zip(tasks, vectors)
    ]
    return LabeledDataset.from_samples(samples)


def _extract_one_indexed(task: tuple[ManifestRow, str], config: RunConfig, side: int) -> FeatureVector:
    row, sample_id = task
    return _extract_row(row, sample_id, config, side)


def write_features_csv(path, dataset: LabeledDataset):
    """Write the feature table: id, label, case_id, then feature columns."""
    path = Path(path)
    lines = [",".join(["id", "label", "case_id", *dataset.feature_names])]
    for i in range(len(dataset)):
        values = (FLOAT_FORMAT.format(v) for v in dataset.features[i])
        lines.append(
            ",".join([dataset.ids[i], dataset.labels[i], dataset.case_ids[i], *values])
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_features_csv(path) -> LabeledDataset:
    """Parse a feature table written by ``write_features_csv``."""
    path = Path(path)
    if not path.is_file():
        raise IoError(f"no such feature table: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"feature table {path} is empty") from None
        if header[:3] != ["id", "label", "case_id"]:
            raise SchemaError(
                f"feature table {path} must start with id,label,case_id columns"
            )
        feature_names = tuple(header[3:])
        if not feature_names:
            raise SchemaError(f"feature table {path} has no feature columns")
        ids, labels, case_ids, rows = [], [], [], []
        for lineno, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != 3 + len(feature_names):
                raise SchemaError(
                    f"{path}:{lineno}: expected {3 + len(feature_names)} fields, "
                    f"got {len(record)}"
                )
            ids.append(record[0])
            labels.append(record[1])
            case_ids.append(record[2])
            try:
                rows.append([float(v) for v in record[3:]])
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise SchemaError(f"feature table {path} has no data rows")
    classes: list[str] = []
    for label in labels:
        if label not in classes:
            classes.append(label)
    return LabeledDataset(
        ids=tuple(ids),
        features=np.asarray(rows, dtype=np.float64),
        labels=tuple(labels),
        case_ids=tuple(case_ids),
        feature_names=feature_names,
        classes=tuple(classes),
    )


def default_jobs() -> int:
    return max(1, os.cpu_count() or 1)
