"""Datasets, seeded Gaussian synthesis, CSV formats, and outcome matrices.

Two CSV formats live here and are the exchange surface with external
harnesses:

* dataset CSV: header ``x1,...,xd,y``, one row per example, features with
  17 significant digits (exact float64 round-trip), labels ``-1``/``1``;
* outcome CSV: header ``g1,...,gp``, one row per example in dataset order,
  entry (i, k) is ``1`` when classifier k agrees with label i, else ``-1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ParseError, ValidationError

# Bit generator behind numpy.random.default_rng; recorded in reports so a
# seed fully identifies a dataset.
GENERATOR_NAME = "numpy.random.PCG64"


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class LabeledDataset:
    """n examples in R^d with labels in {-1, +1}. Immutable once built."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels)
        if features.ndim != 2 or features.shape[0] < 1 or features.shape[1] < 1:
            raise ValidationError(
                f"features must be a non-empty 2-D array, got shape {features.shape}"
            )
        if labels.shape != (features.shape[0],):
            raise ValidationError(
                f"labels shape {labels.shape} does not match {features.shape[0]} examples"
            )
        if not np.all(np.isfinite(features)):
            raise ValidationError("features contain non-finite values")
        if not np.all(np.isin(labels, (-1, 1))):
            raise ValidationError("labels must all be -1 or +1")
        object.__setattr__(self, "features", _frozen(features))
        object.__setattr__(self, "labels", _frozen(labels.astype(np.int64)))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class GaussianSpec:
    """Spec for a two-class isotropic Gaussian mixture with equal priors.

    ``mean_pos``/``mean_neg`` default to (+1, 0, ..., 0) and (-1, 0, ..., 0);
    the covariance is ``covariance_scale`` times the identity.  The seed
    fully determines the sample (see GENERATOR_NAME).
    """

    n: int
    d: int
    mean_pos: tuple[float, ...] | None = None
    mean_neg: tuple[float, ...] | None = None
    covariance_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError(f"need n >= 2 examples, got {self.n}")
        if self.d < 1:
            raise ValidationError(f"need d >= 1 dimensions, got {self.d}")
        if not (self.covariance_scale > 0) or not math.isfinite(self.covariance_scale):
            raise ValidationError(
                f"covariance_scale must be a positive real, got {self.covariance_scale}"
            )
        mean_pos = self._resolve_mean(self.mean_pos, +1.0)
        mean_neg = self._resolve_mean(self.mean_neg, -1.0)
        object.__setattr__(self, "mean_pos", mean_pos)
        object.__setattr__(self, "mean_neg", mean_neg)

    def _resolve_mean(self, mean, first_coord: float) -> tuple[float, ...]:
        if mean is None:
            return (first_coord,) + (0.0,) * (self.d - 1)
        mean = tuple(float(v) for v in np.atleast_1d(mean))
        if len(mean) != self.d:
            raise ValidationError(
                f"class mean has {len(mean)} coordinates, expected d={self.d}"
            )
        if not all(math.isfinite(v) for v in mean):
            raise ValidationError("class means must be finite")
        return mean


def generate_gaussian(spec: GaussianSpec) -> LabeledDataset:
    """Draw a dataset from ``spec``. Pure: equal specs give equal samples."""
    rng = np.random.default_rng(spec.seed)
    labels = rng.integers(0, 2, size=spec.n) * 2 - 1
    noise = rng.standard_normal((spec.n, spec.d))
    means = np.where(
        (labels > 0)[:, None],
        np.asarray(spec.mean_pos)[None, :],
        np.asarray(spec.mean_neg)[None, :],
    )
    features = means + math.sqrt(spec.covariance_scale) * noise
    return LabeledDataset(features=features, labels=labels)


def _format_float(v: float) -> str:
    return format(v, ".17g")


def write_dataset(dataset: LabeledDataset, path: str | Path) -> None:
    """Write the dataset CSV (see module docstring for the exact format)."""
    header = ",".join(f"x{i + 1}" for i in range(dataset.d)) + ",y"
    lines = [header]
    for row, label in zip(dataset.features, dataset.labels):
        lines.append(
            ",".join(_format_float(v) for v in row) + f",{int(label)}"
        )
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def read_dataset(path: str | Path) -> LabeledDataset:
    """Parse a dataset CSV; raises ParseError naming the offending line."""
    text = Path(path).read_text()
    lines = [ln for ln in text.split("\n") if ln != ""]
    if not lines:
        raise ParseError(f"{path}: no data rows (empty file)")
    header = lines[0].split(",")
    if len(header) < 2 or header[-1] != "y" or any(
        name != f"x{i + 1}" for i, name in enumerate(header[:-1])
    ):
        raise ParseError(f"{path}: line 1: bad header {lines[0]!r}")
    d = len(header) - 1
    if len(lines) == 1:
        raise ParseError(f"{path}: no data rows")
    rows = []
    labels = []
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split(",")
        if len(tokens) != d + 1:
            raise ParseError(
                f"{path}: line {lineno}: expected {d + 1} columns, got {len(tokens)}"
            )
        try:
            values = [float(t) for t in tokens]
        except ValueError as exc:
            raise ParseError(f"{path}: line {lineno}: {exc}") from exc
        if values[-1] not in (-1.0, 1.0):
            raise ParseError(
                f"{path}: line {lineno}: label must be -1 or 1, got {tokens[-1]!r}"
            )
        if not all(math.isfinite(v) for v in values[:-1]):
            raise ParseError(f"{path}: line {lineno}: non-finite feature value")
        rows.append(values[:-1])
        labels.append(int(values[-1]))
    return LabeledDataset(features=np.array(rows), labels=np.array(labels))


def outcome_matrix(dataset: LabeledDataset, classifiers: Sequence) -> np.ndarray:
    """Sign matrix of agreement between each classifier and the labels.

    Entry (i, k) is +1 iff classifier k predicts label i correctly, else -1.
    Classifiers must implement ``predict_batch`` and ``validate_dim``.
    """
    if len(classifiers) < 1:
        raise ValidationError("need at least one classifier")
    for clf in classifiers:
        clf.validate_dim(dataset.d)
    columns = [clf.predict_batch(dataset.features) for clf in classifiers]
    return (dataset.labels[:, None] * np.stack(columns, axis=1)).astype(np.int8)


def write_outcomes(outcomes: np.ndarray, path: str | Path) -> None:
    """Write the outcome CSV (header ``g1,...,gp``, one row per example)."""
    outcomes = _validated_outcomes(outcomes)
    p = outcomes.shape[1]
    header = ",".join(f"g{k + 1}" for k in range(p))
    lines = [header]
    lines.extend(",".join(str(int(v)) for v in row) for row in outcomes)
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def read_outcomes(path: str | Path) -> np.ndarray:
    """Parse an outcome CSV back into an n x p sign matrix."""
    text = Path(path).read_text()
    lines = [ln for ln in text.split("\n") if ln != ""]
    if not lines:
        raise ParseError(f"{path}: no data rows (empty file)")
    header = lines[0].split(",")
    if any(name != f"g{k + 1}" for k, name in enumerate(header)):
        raise ParseError(f"{path}: line 1: bad header {lines[0]!r}")
    p = len(header)
    if len(lines) == 1:
        raise ParseError(f"{path}: no data rows")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split(",")
        if len(tokens) != p:
            raise ParseError(
                f"{path}: line {lineno}: expected {p} columns, got {len(tokens)}"
            )
        try:
            row = [int(t) for t in tokens]
        except ValueError as exc:
            raise ParseError(f"{path}: line {lineno}: {exc}") from exc
        if any(v not in (-1, 1) for v in row):
            raise ParseError(
                f"{path}: line {lineno}: outcome entries must be -1 or 1"
            )
        rows.append(row)
    return np.array(rows, dtype=np.int8)


def _validated_outcomes(outcomes: np.ndarray) -> np.ndarray:
    outcomes = np.asarray(outcomes)
    if outcomes.ndim != 2 or outcomes.shape[0] < 1 or outcomes.shape[1] < 1:
        raise ValidationError(
            f"outcome matrix must be non-empty 2-D, got shape {outcomes.shape}"
        )
    if not np.all(np.isin(outcomes, (-1, 1))):
        raise ValidationError("outcome entries must all be -1 or +1")
    return outcomes
