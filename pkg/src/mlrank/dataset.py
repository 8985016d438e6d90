"""Multi-label datasets: CSV I/O, splitting, standardization and discretization."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DatasetError(ValueError):
    """Raised when a dataset file or array fails validation."""


@dataclass(frozen=True)
class MultiLabelDataset:
    """Feature matrix ``features`` (n x p) with binary ``labels`` (n x K)."""

    features: np.ndarray
    labels: np.ndarray
    feature_names: list[str] = field(default_factory=list)
    label_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        Y = np.asarray(self.labels)
        if X.ndim != 2 or Y.ndim != 2:
            raise DatasetError("features and labels must be 2-d arrays")
        if X.shape[0] != Y.shape[0]:
            raise DatasetError(
                f"row count mismatch: {X.shape[0]} feature rows, {Y.shape[0]} label rows"
            )
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise DatasetError("need at least one row and one feature")
        if Y.shape[1] < 2:
            raise DatasetError("need at least two labels")
        if not np.all(np.isfinite(X)):
            raise DatasetError("features contain non-finite values")
        if not np.all((Y == 0) | (Y == 1)):
            raise DatasetError("labels must be 0 or 1")
        fnames = list(self.feature_names) or [f"x{j + 1}" for j in range(X.shape[1])]
        lnames = list(self.label_names) or [f"y{k + 1}" for k in range(Y.shape[1])]
        if len(fnames) != X.shape[1] or len(lnames) != Y.shape[1]:
            raise DatasetError("name lists do not match matrix widths")
        X = X.copy()
        X.flags.writeable = False
        Y = Y.astype(np.int8)
        Y.flags.writeable = False
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", Y)
        object.__setattr__(self, "feature_names", fnames)
        object.__setattr__(self, "label_names", lnames)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def K(self) -> int:
        return self.labels.shape[1]

    def subset(self, rows=None, features=None) -> "MultiLabelDataset":
        """Row and/or feature-column subset, names carried along."""
        rows = np.arange(self.n) if rows is None else np.asarray(rows, dtype=int)
        cols = np.arange(self.p) if features is None else np.asarray(features, dtype=int)
        return MultiLabelDataset(
            self.features[np.ix_(rows, cols)],
            self.labels[rows],
            [self.feature_names[j] for j in cols],
            list(self.label_names),
        )

    def with_features(self, features: np.ndarray) -> "MultiLabelDataset":
        return MultiLabelDataset(features, self.labels, self.feature_names, self.label_names)


@dataclass(frozen=True)
class DataSplit:
    train_idx: np.ndarray
    val_idx: np.ndarray
    test_idx: np.ndarray


@dataclass(frozen=True)
class DiscretizationMap:
    """Per-feature sorted bin boundaries; value v gets code #{b < v}."""

    boundaries: list[np.ndarray]
    bins: int

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        codes = np.empty(X.shape, dtype=np.int64)
        for j, b in enumerate(self.boundaries):
            codes[:, j] = np.searchsorted(b, X[:, j], side="left")
        return codes


def _parse_float(cell: str, row: int, col: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise DatasetError(f"row {row}, column {col}: cannot parse {cell!r} as a number") from None
    if not math.isfinite(value):
        raise DatasetError(f"row {row}, column {col}: non-finite value {cell!r}")
    return value


def load_csv(path, label_count: int, has_header: bool = True,
             labels_first: bool = False) -> MultiLabelDataset:
    """Read a comma-separated multi-label dataset.

    The last ``label_count`` columns hold the labels (the first ones when
    ``labels_first`` is set). Row and column numbers in error messages are
    1-based and count the header line.
    """
    path = Path(path)
    if label_count < 2:
        raise DatasetError("label_count must be at least 2")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise DatasetError(f"{path}: empty file")
    header = None
    first_line = 1
    if has_header:
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        first_line = 2
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    width = len(header) if header is not None else len(rows[0])
    if width <= label_count:
        raise DatasetError(f"{path}: {width} columns cannot hold {label_count} labels plus features")

    values = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        line = i + first_line
        if len(row) != width:
            raise DatasetError(f"row {line}: expected {width} columns, found {len(row)}")
        for j, cell in enumerate(row):
            cell = cell.strip()
            if cell == "":
                raise DatasetError(f"row {line}, column {j + 1}: missing value")
            values[i, j] = _parse_float(cell, line, j + 1)

    if labels_first:
        label_cols = np.arange(label_count)
        feat_cols = np.arange(label_count, width)
    else:
        feat_cols = np.arange(width - label_count)
        label_cols = np.arange(width - label_count, width)

    Y = values[:, label_cols]
    bad = np.argwhere((Y != 0) & (Y != 1))
    if bad.size:
        i, j = bad[0]
        raise DatasetError(
            f"row {i + first_line}, column {label_cols[j] + 1}: label value "
            f"{rows[i][label_cols[j]].strip()!r} is not 0 or 1"
        )
    names = header or []
    return MultiLabelDataset(
        values[:, feat_cols],
        Y.astype(np.int8),
        [names[j] for j in feat_cols] if names else [],
        [names[j] for j in label_cols] if names else [],
    )


def write_csv(ds: MultiLabelDataset, path, header: bool = True) -> None:
    """Write ``ds`` with features first, labels last.

    Floats are written with ``repr`` so that :func:`load_csv` recovers them
    bit for bit.
    """
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow(ds.feature_names + ds.label_names)
        for x, y in zip(ds.features, ds.labels):
            w.writerow([repr(float(v)) for v in x] + [str(int(v)) for v in y])


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def split(ds: MultiLabelDataset, train_frac: float, val_frac: float = 0.0,
          seed: int = 0) -> DataSplit:
    """Random train/validation/test partition; leftover rows go to test."""
    if not 0.0 < train_frac <= 1.0:
        raise ValueError(f"train_frac must lie in (0, 1], got {train_frac}")
    if not 0.0 <= val_frac < 1.0:
        raise ValueError(f"val_frac must lie in [0, 1), got {val_frac}")
    if train_frac + val_frac > 1.0 + 1e-12:
        raise ValueError("train_frac + val_frac exceeds 1")
    n = ds.n if isinstance(ds, MultiLabelDataset) else int(ds)
    n_train = min(n, _round_half_up(train_frac * n))
    n_val = min(n - n_train, _round_half_up(val_frac * n))
    if n_train < 1:
        raise ValueError("training partition would be empty")
    perm = np.random.default_rng(seed).permutation(n)
    return DataSplit(
        np.sort(perm[:n_train]),
        np.sort(perm[n_train:n_train + n_val]),
        np.sort(perm[n_train + n_val:]),
    )


def standardize(ds: MultiLabelDataset) -> MultiLabelDataset:
    """Center columns and scale by the population standard deviation."""
    return ds.with_features(standardize_array(ds.features))


def standardize_array(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    const = sd <= 1e-12 * np.maximum(1.0, np.abs(mean))
    Z = (X - mean) / np.where(const, 1.0, sd)
    Z[:, const] = 0.0
    return Z


def discretize(ds: MultiLabelDataset, bins: int = 10):
    """Equal-frequency binning of every feature.

    Returns the dataset with integer codes in ``0..bins-1`` as features and
    the :class:`DiscretizationMap` that produced them. Tied values always
    share a bin, so heavily tied features may use fewer than ``bins`` codes.
    """
    X, dmap = discretize_array(ds.features, bins)
    return ds.with_features(X.astype(float)), dmap


def discretize_array(X: np.ndarray, bins: int = 10):
    if int(bins) != bins or bins < 2:
        raise ValueError(f"bins must be an integer >= 2, got {bins}")
    X = np.asarray(X, dtype=float)
    qs = np.arange(1, bins) / bins
    boundaries = [np.unique(np.quantile(X[:, j], qs)) for j in range(X.shape[1])]
    dmap = DiscretizationMap(boundaries, int(bins))
    return dmap.transform(X), dmap
