"""Named, ordered feature vectors and their fusion."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from texbank.errors import NameCollisionError


@dataclass(frozen=True)
class FeatureVector:
    """Ordered (name, value) pairs produced by an extractor or a fusion.

    Names are unique, values are finite float64 and kept in lock-step with
    the names.
    """

    names: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        vals = np.asarray(self.values, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "values", vals)
        if len(self.names) != vals.size:
            raise ValueError(
                f"{len(self.names)} names but {vals.size} values"
            )
        if len(set(self.names)) != len(self.names):
            raise ValueError("feature names must be unique")
        if not np.all(np.isfinite(vals)):
            raise ValueError("feature values must be finite")

    def __len__(self) -> int:
        return len(self.names)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names, self.values.tolist()))


def fuse(parts: Sequence[FeatureVector] | Iterable[FeatureVector]) -> FeatureVector:
    """Concatenate feature vectors, preserving part order and internal order.

    Raises NameCollisionError when the same feature name appears in more
    than one part.
    """
    parts = list(parts)
    names: list[str] = []
    seen: set[str] = set()
    for part in parts:
        for name in part.names:
            if name in seen:
                raise NameCollisionError(f"duplicate feature name {name!r}")
            seen.add(name)
            names.append(name)
    if not parts:
        return FeatureVector((), np.empty(0))
    values = np.concatenate([part.values for part in parts])
    return FeatureVector(tuple(names), values)
