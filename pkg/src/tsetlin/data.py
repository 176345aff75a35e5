"""Datasets: fixed-point binarization, Iris, the synthetic mixed-granularity
task, train/test splitting, and a plain-text fixture format.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .core import _as_generator


@dataclass(frozen=True)
class FixedPointEncoding:
    """Bit budget for encoding a nonnegative real as integer and fraction fields."""

    int_bits: int = 3
    frac_bits: int = 2

    def __post_init__(self):
        if self.int_bits < 0 or self.frac_bits < 0 or self.int_bits + self.frac_bits < 1:
            raise ValueError("need nonnegative bit counts summing to >= 1")

    @property
    def n_bits(self) -> int:
        return self.int_bits + self.frac_bits


@dataclass
class BinaryDataset:
    """Rows of binary features with one integer class label per row."""

    inputs: np.ndarray
    labels: np.ndarray
    label_names: list[str] | None = None

    def __post_init__(self):
        self.inputs = np.ascontiguousarray(self.inputs, dtype=np.uint8)
        self.labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if self.inputs.ndim != 2:
            raise ValueError("inputs must be a 2-D bit matrix")
        if self.labels.shape != (self.inputs.shape[0],):
            raise ValueError("need exactly one label per row")
        if self.inputs.size and self.inputs.max() > 1:
            raise ValueError("inputs must be binary (0/1)")
        if self.labels.size and self.labels.min() < 0:
            raise ValueError("labels must be nonnegative")
        if self.label_names is not None and self.labels.size:
            if self.labels.max() >= len(self.label_names):
                raise ValueError("label out of range of label_names")

    @property
    def n_features(self) -> int:
        return self.inputs.shape[1]

    @property
    def n_classes(self) -> int:
        if self.label_names is not None:
            return len(self.label_names)
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def __len__(self) -> int:
        return self.inputs.shape[0]


def binarize_value(x: float, enc: FixedPointEncoding = FixedPointEncoding()) -> np.ndarray:
    """Big-endian integer field then big-endian quantized fraction field.

    The fraction is floor(frac(x) * 2^frac_bits). An integer part too large
    for the field saturates to all ones with a warning.
    """
    if x < 0:
        raise ValueError("fixed-point encoding expects nonnegative values")
    int_val = int(np.floor(x))
    cap = (1 << enc.int_bits) - 1
    if int_val > cap:
        warnings.warn(f"integer part {int_val} exceeds {enc.int_bits}-bit field, saturating")
        int_val = cap
    frac_val = int(np.floor((x - np.floor(x)) * (1 << enc.frac_bits)))
    bits = np.empty(enc.n_bits, dtype=np.uint8)
    for k in range(enc.int_bits):
        bits[k] = (int_val >> (enc.int_bits - 1 - k)) & 1
    for k in range(enc.frac_bits):
        bits[enc.int_bits + k] = (frac_val >> (enc.frac_bits - 1 - k)) & 1
    return bits


def binarize_features(values, enc: FixedPointEncoding = FixedPointEncoding()) -> np.ndarray:
    """Encode a (rows, features) real matrix as a (rows, features * n_bits) bit matrix."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError("expected a 2-D feature matrix")
    rows, feats = values.shape
    out = np.empty((rows, feats * enc.n_bits), dtype=np.uint8)
    for i in range(rows):
        for f in range(feats):
            out[i, f * enc.n_bits:(f + 1) * enc.n_bits] = binarize_value(values[i, f], enc)
    return out


def bundled_iris_path() -> Path:
    return Path(str(resources.files("tsetlin").joinpath("datasets/iris.csv")))


def load_iris(path=None, enc: FixedPointEncoding = FixedPointEncoding()) -> BinaryDataset:
    """Load an Iris CSV (4 numeric columns + class name, no header).

    Classes are numbered in order of first appearance. The bundled copy is
    used when no path is given.
    """
    path = bundled_iris_path() if path is None else Path(path)
    values, names, label_names = [], [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 5:
                raise ValueError(f"{path}:{lineno}: expected 4 features and a class, got {len(parts)} fields")
            try:
                values.append([float(v) for v in parts[:4]])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed numeric value") from None
            names.append(parts[4])
    if not values:
        raise ValueError(f"{path}: no data rows")
    for name in names:
        if name not in label_names:
            label_names.append(name)
    labels = np.array([label_names.index(n) for n in names], dtype=np.int64)
    return BinaryDataset(binarize_features(np.array(values), enc), labels, label_names)


def synthetic_labels(inputs) -> np.ndarray:
    """Label rule of the mixed-granularity task, applied row-wise.

    When x1 = 0 the label copies x2; when x1 = 1 it is the parity
    x3 xor x4 xor x5 xor x6.
    """
    X = np.asarray(inputs, dtype=np.uint8)
    if X.ndim != 2 or X.shape[1] != 6:
        raise ValueError("expected a (rows, 6) bit matrix")
    parity = (X[:, 2] ^ X[:, 3] ^ X[:, 4] ^ X[:, 5]).astype(np.int64)
    return np.where(X[:, 0] == 0, X[:, 1].astype(np.int64), parity)


def generate_synthetic(count: int, rng=None) -> BinaryDataset:
    """Mixed-granularity binary task over six variables.

    Inputs are uniform over {0,1}^6. When x1 = 0 the label copies x2 (two
    coarse two-variable patterns); when x1 = 1 the label is the parity
    x3 xor x4 xor x5 xor x6 (two fine five-variable patterns). Each of the
    four patterns covers about a quarter of the examples. Noise-free.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = _as_generator(rng)
    X = rng.integers(0, 2, size=(count, 6), dtype=np.uint8)
    return BinaryDataset(X, synthetic_labels(X))


def split_dataset(ds: BinaryDataset, test_fraction: float, rng=None) -> tuple[BinaryDataset, BinaryDataset]:
    """Random partition into (train, test); train gets round(count * (1 - f)) rows."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must lie in (0, 1)")
    rng = _as_generator(rng)
    n = len(ds)
    n_train = int(np.floor(n * (1.0 - test_fraction) + 0.5))
    if n_train == 0 or n_train == n:
        raise ValueError("split would leave one side empty")
    perm = rng.permutation(n)
    tr, te = perm[:n_train], perm[n_train:]
    return (
        BinaryDataset(ds.inputs[tr], ds.labels[tr], ds.label_names),
        BinaryDataset(ds.inputs[te], ds.labels[te], ds.label_names),
    )


def save_dataset(ds: BinaryDataset, path) -> None:
    """Write the fixture format: one row per line, '0'/'1' per feature, space, label."""
    with open(path, "w", encoding="utf-8") as fh:
        for row, label in zip(ds.inputs, ds.labels):
            fh.write("".join("1" if b else "0" for b in row) + f" {label}\n")


def load_dataset(path) -> BinaryDataset:
    """Read the fixture format written by `save_dataset`."""
    inputs, labels = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2 or set(parts[0]) - {"0", "1"}:
                raise ValueError(f"{path}:{lineno}: expected a bit string and an integer label")
            try:
                labels.append(int(parts[1]))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed label") from None
            inputs.append([1 if ch == "1" else 0 for ch in parts[0]])
    if not inputs:
        raise ValueError(f"{path}: no data rows")
    widths = {len(r) for r in inputs}
    if len(widths) != 1:
        raise ValueError(f"{path}: inconsistent row widths {sorted(widths)}")
    return BinaryDataset(np.array(inputs, dtype=np.uint8), np.array(labels, dtype=np.int64))
