"""Declarative experiments: repeated train/evaluate runs, grid search, and
result emission.

Every unit of work (run r on split p) trains from a sub-seed derived as
mix_seed(spec.seed, 1, r, p), so adding runs or splits never perturbs the
seeds of earlier units, and permuting unit order permutes results without
changing any value. Split membership uses mix_seed(spec.seed, 2, p), which
depends only on the experiment seed and split index: two machines configured
with the same seed see identical splits. Units are independent and merged by
index, so they could run concurrently; this implementation runs them
sequentially.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .core import MultiClassTsetlinMachine, TsetlinMachine, threshold_to_votes
from .data import (
    BinaryDataset,
    FixedPointEncoding,
    generate_synthetic,
    load_dataset,
    load_iris,
    split_dataset,
)
from .multigranular import MultigranularTsetlinMachine, SpecificityRange

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One SplitMix64 step; the stable 64-bit mixer behind all sub-seeds."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix_seed(*parts: int) -> int:
    """Fold integers into one 64-bit seed: h = splitmix64(h ^ part), left to right."""
    h = 0
    for p in parts:
        h = splitmix64(h ^ (int(p) & _MASK64))
    return h


def _unit_rng(seed: int, run: int, split: int) -> np.random.Generator:
    return np.random.default_rng(np.random.PCG64(mix_seed(seed, 1, run, split)))


def _split_rng(seed: int, split: int) -> np.random.Generator:
    return np.random.default_rng(np.random.PCG64(mix_seed(seed, 2, split)))


@dataclass(frozen=True)
class ClassicMachine:
    specificity: float

    def __post_init__(self):
        if self.specificity < 1.0:
            raise ValueError("specificity must be >= 1")


@dataclass(frozen=True)
class MultigranularMachine:
    range: SpecificityRange = SpecificityRange()


@dataclass(frozen=True)
class SyntheticSource:
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("synthetic count must be >= 1")


@dataclass(frozen=True)
class IrisSource:
    path: str | None = None
    encoding: FixedPointEncoding = FixedPointEncoding()


@dataclass(frozen=True)
class FixtureSource:
    path: str


@dataclass(frozen=True)
class SplitPlan:
    count: int
    fraction: float = 0.2

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("split count must be >= 1")
        if not 0.0 < self.fraction < 1.0:
            raise ValueError("split fraction must lie in (0, 1)")


@dataclass(frozen=True)
class ExperimentSpec:
    machine: ClassicMachine | MultigranularMachine
    clauses: int
    threshold: float
    epochs: int
    dataset: SyntheticSource | IrisSource | FixtureSource
    runs: int = 1
    splits: SplitPlan | None = None
    seed: int = 0
    checkpoints: tuple[int, ...] = ()

    def __post_init__(self):
        problems = []
        if self.clauses < 2 or self.clauses % 2:
            problems.append("clauses must be even and >= 2")
        if not 0.0 < self.threshold <= 1.0:
            problems.append("threshold must lie in (0, 1]")
        if self.epochs < 1:
            problems.append("epochs must be >= 1")
        if self.runs < 1:
            problems.append("runs must be >= 1")
        if isinstance(self.dataset, SyntheticSource) and self.splits is not None:
            problems.append("synthetic datasets are pre-split; drop the splits block")
        cps = tuple(sorted(set(int(c) for c in self.checkpoints)))
        if any(c < 1 or c > self.epochs for c in cps):
            problems.append("checkpoints must lie in [1, epochs]")
        if problems:
            raise ValueError("invalid experiment spec: " + "; ".join(problems))
        object.__setattr__(self, "checkpoints", cps)

    @property
    def effective_checkpoints(self) -> tuple[int, ...]:
        return self.checkpoints or (self.epochs,)

    @property
    def threshold_abs(self) -> int:
        return threshold_to_votes(self.threshold, self.clauses)

    def to_dict(self) -> dict:
        if isinstance(self.machine, ClassicMachine):
            machine = {"kind": "classic", "specificity": self.machine.specificity}
        else:
            machine = {
                "kind": "multigranular",
                "range": [self.machine.range.lower, self.machine.range.upper],
            }
        if isinstance(self.dataset, SyntheticSource):
            dataset = {"kind": "synthetic", "count": self.dataset.count}
        elif isinstance(self.dataset, IrisSource):
            dataset = {"kind": "iris"}
            if self.dataset.path is not None:
                dataset["path"] = self.dataset.path
            dataset["encoding"] = [self.dataset.encoding.int_bits, self.dataset.encoding.frac_bits]
        else:
            dataset = {"kind": "fixture", "path": self.dataset.path}
        out = {
            "machine": machine,
            "clauses": self.clauses,
            "threshold": self.threshold,
            "epochs": self.epochs,
            "dataset": dataset,
            "runs": self.runs,
            "seed": self.seed,
        }
        if self.splits is not None:
            out["splits"] = {"count": self.splits.count, "fraction": self.splits.fraction}
        if self.checkpoints:
            out["checkpoints"] = list(self.checkpoints)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentSpec":
        return _spec_from_dict(doc)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        doc = json.loads(text)
        if not isinstance(doc, dict):
            raise ValueError("experiment spec must be a JSON object")
        return _spec_from_dict(doc)


def _require_keys(doc: dict, allowed: dict, where: str) -> dict:
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise ValueError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    missing = sorted(k for k, required in allowed.items() if required and k not in doc)
    if missing:
        raise ValueError(f"missing key(s) in {where}: {', '.join(missing)}")
    return doc


def _machine_from_dict(doc) -> ClassicMachine | MultigranularMachine:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError("machine must be an object with a 'kind'")
    kind = doc["kind"]
    if kind == "classic":
        _require_keys(doc, {"kind": True, "specificity": True}, "machine")
        return ClassicMachine(float(doc["specificity"]))
    if kind == "multigranular":
        _require_keys(doc, {"kind": True, "range": False}, "machine")
        rng = doc.get("range", (2.0, 200.0))
        if not isinstance(rng, (list, tuple)) or len(rng) != 2:
            raise ValueError("machine.range must be a two-element array [lower, upper]")
        return MultigranularMachine(SpecificityRange(float(rng[0]), float(rng[1])))
    raise ValueError(f"unknown machine kind {kind!r}")


def _dataset_from_dict(doc) -> SyntheticSource | IrisSource | FixtureSource:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError("dataset must be an object with a 'kind'")
    kind = doc["kind"]
    if kind == "synthetic":
        _require_keys(doc, {"kind": True, "count": True}, "dataset")
        return SyntheticSource(int(doc["count"]))
    if kind == "iris":
        _require_keys(doc, {"kind": True, "path": False, "encoding": False}, "dataset")
        enc = doc.get("encoding", (3, 2))
        return IrisSource(doc.get("path"), FixedPointEncoding(int(enc[0]), int(enc[1])))
    if kind == "fixture":
        _require_keys(doc, {"kind": True, "path": True}, "dataset")
        return FixtureSource(str(doc["path"]))
    raise ValueError(f"unknown dataset kind {kind!r}")


def _spec_from_dict(doc: dict) -> ExperimentSpec:
    allowed = {
        "machine": True, "clauses": True, "threshold": True, "epochs": True,
        "dataset": True, "runs": False, "splits": False, "seed": False,
        "checkpoints": False,
    }
    _require_keys(doc, allowed, "experiment spec")
    splits = None
    if doc.get("splits") is not None:
        sdoc = _require_keys(doc["splits"], {"count": True, "fraction": False}, "splits")
        splits = SplitPlan(int(sdoc["count"]), float(sdoc.get("fraction", 0.2)))
    return ExperimentSpec(
        machine=_machine_from_dict(doc["machine"]),
        clauses=int(doc["clauses"]),
        threshold=float(doc["threshold"]),
        epochs=int(doc["epochs"]),
        dataset=_dataset_from_dict(doc["dataset"]),
        runs=int(doc.get("runs", 1)),
        splits=splits,
        seed=int(doc.get("seed", 0)),
        checkpoints=tuple(doc.get("checkpoints", ())),
    )


@dataclass
class RunResult:
    """Per-unit test accuracies at each checkpoint epoch, plus aggregates."""

    seed: int
    threshold_abs: int
    checkpoints: tuple[int, ...]
    accuracies: np.ndarray  # shape (units, len(checkpoints))
    wall_clock: np.ndarray  # seconds per unit

    @property
    def means(self) -> np.ndarray:
        return self.accuracies.mean(axis=0)

    @property
    def stds(self) -> np.ndarray:
        return self.accuracies.std(axis=0)

    @property
    def final_mean(self) -> float:
        return float(self.means[-1])

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "threshold_abs": self.threshold_abs,
            "checkpoints": list(self.checkpoints),
            "per_run_accuracy": self.accuracies.tolist(),
            "wall_clock_seconds": self.wall_clock.tolist(),
            "mean_accuracy": self.means.tolist(),
            "std_accuracy": self.stds.tolist(),
        }


@dataclass
class SweepGrid:
    """Mean-accuracy surface over specificity and threshold axes."""

    s_values: tuple  # (None,) for threshold-only multigranular sweeps
    t_values: tuple
    mean_accuracy: np.ndarray  # NaN where a cell failed
    clauses: int
    epochs: int
    seed: int
    cells: list  # per-cell RunResult, None where missing
    missing: list = field(default_factory=list)

    @property
    def best(self) -> tuple | None:
        """(s, T, accuracy) of the best cell, or None if every cell failed."""
        if np.all(np.isnan(self.mean_accuracy)):
            return None
        flat = np.nanargmax(self.mean_accuracy)
        i, j = np.unravel_index(flat, self.mean_accuracy.shape)
        return (self.s_values[i], self.t_values[j], float(self.mean_accuracy[i, j]))

    def to_dict(self) -> dict:
        acc = [[None if np.isnan(v) else float(v) for v in row] for row in self.mean_accuracy]
        best = self.best
        return {
            "s_values": list(self.s_values),
            "t_values": list(self.t_values),
            "clauses": self.clauses,
            "epochs": self.epochs,
            "seed": self.seed,
            "mean_accuracy": acc,
            "missing": [list(c) for c in self.missing],
            "best": list(best) if best is not None else None,
            "cells": [[c.to_dict() if c is not None else None for c in row] for row in self.cells],
        }


def _build_machine(spec: ExperimentSpec, n_features: int):
    if isinstance(spec.machine, ClassicMachine):
        return TsetlinMachine(n_features, spec.clauses, spec.threshold, spec.machine.specificity)
    return MultigranularTsetlinMachine(n_features, spec.clauses, spec.threshold, spec.machine.range)


def _load_source(spec: ExperimentSpec) -> BinaryDataset | None:
    if isinstance(spec.dataset, SyntheticSource):
        return None
    if isinstance(spec.dataset, IrisSource):
        return load_iris(spec.dataset.path, spec.dataset.encoding)
    return load_dataset(spec.dataset.path)


def run_experiment(spec: ExperimentSpec) -> RunResult:
    """Train and evaluate runs x splits independent units; aggregate accuracies.

    Binary datasets train a single clause pool; datasets with more classes
    train one pool per class. Synthetic sources draw a fresh train and test
    set per unit; split sources share split membership across runs (and
    across machines configured with the same seed).
    """
    source = _load_source(spec)
    checkpoints = spec.effective_checkpoints
    if source is None:
        split_pairs, n_classes = None, 2
    else:
        n_classes = source.n_classes
        if spec.splits is not None:
            split_pairs = [
                split_dataset(source, spec.splits.fraction, _split_rng(spec.seed, p))
                for p in range(spec.splits.count)
            ]
        else:
            split_pairs = [(source, source)]
    n_splits = 1 if split_pairs is None else len(split_pairs)
    accuracies = np.zeros((spec.runs * n_splits, len(checkpoints)))
    wall_clock = np.zeros(spec.runs * n_splits)
    for r in range(spec.runs):
        for p in range(n_splits):
            unit = r * n_splits + p
            rng = _unit_rng(spec.seed, r, p)
            started = time.perf_counter()
            if split_pairs is None:
                count = spec.dataset.count
                train = generate_synthetic(count, rng)
                test = generate_synthetic(count, rng)
            else:
                train, test = split_pairs[p]
            if n_classes <= 2:
                machine = _build_machine(spec, train.n_features)
            else:
                machine = MultiClassTsetlinMachine(
                    [_build_machine(spec, train.n_features) for _ in range(n_classes)]
                )
            ci = 0
            for epoch in range(1, spec.epochs + 1):
                machine.fit_epoch(train.inputs, train.labels, rng)
                if ci < len(checkpoints) and epoch == checkpoints[ci]:
                    accuracies[unit, ci] = machine.score(test.inputs, test.labels)
                    ci += 1
            wall_clock[unit] = time.perf_counter() - started
    return RunResult(spec.seed, spec.threshold_abs, checkpoints, accuracies, wall_clock)


def train_model(spec: ExperimentSpec, run: int = 0, split: int = 0):
    """Train the single (run, split) unit exactly as run_experiment does.

    Returns (machine, test_dataset): the concrete model behind one cell of
    an averaged experiment, for saving or inspection.
    """
    source = _load_source(spec)
    rng = _unit_rng(spec.seed, run, split)
    if source is None:
        train = generate_synthetic(spec.dataset.count, rng)
        test = generate_synthetic(spec.dataset.count, rng)
        n_classes = 2
    else:
        n_classes = source.n_classes
        if spec.splits is not None:
            if not 0 <= split < spec.splits.count:
                raise ValueError(f"split index {split} outside the split plan")
            train, test = split_dataset(source, spec.splits.fraction, _split_rng(spec.seed, split))
        else:
            train = test = source
    if n_classes <= 2:
        machine = _build_machine(spec, train.n_features)
    else:
        machine = MultiClassTsetlinMachine(
            [_build_machine(spec, train.n_features) for _ in range(n_classes)]
        )
    machine.fit(train.inputs, train.labels, spec.epochs, rng)
    return machine, test


def grid_search(base: ExperimentSpec, s_values=None, t_values=None) -> SweepGrid:
    """Mean accuracy for every (s, T) cell; cells share the base seed.

    Classic machines sweep both axes; multigranular machines sweep threshold
    only (a degenerate 1 x |T| grid). Cells that raise are recorded as
    missing, not fatal.
    """
    t_values = tuple(float(t) for t in (t_values or ()))
    if not t_values:
        raise ValueError("t_values must be nonempty")
    if isinstance(base.machine, MultigranularMachine):
        if s_values:
            raise ValueError("multigranular machines have no specificity axis; sweep threshold only")
        rows: tuple = (None,)
    else:
        rows = tuple(float(s) for s in (s_values or ()))
        if not rows:
            raise ValueError("s_values must be nonempty for a classic sweep")
    matrix = np.full((len(rows), len(t_values)), np.nan)
    cells: list[list[RunResult | None]] = [[None] * len(t_values) for _ in rows]
    missing: list[tuple[int, int]] = []
    for i, s in enumerate(rows):
        for j, t in enumerate(t_values):
            try:
                if s is None:
                    cell = replace(base, threshold=t)
                else:
                    cell = replace(base, machine=ClassicMachine(s), threshold=t)
                result = run_experiment(cell)
            except Exception:
                missing.append((i, j))
                continue
            matrix[i, j] = result.means[-1]
            cells[i][j] = result
    return SweepGrid(rows, t_values, matrix, base.clauses, base.epochs, base.seed, cells, missing)


def _csv_cell(value: float) -> str:
    return "" if np.isnan(value) else repr(float(value))


def _to_csv(result) -> str:
    if isinstance(result, RunResult):
        header = ",".join(f"epoch_{c}" for c in result.checkpoints)
        means = ",".join(repr(float(v)) for v in result.means)
        return header + "\n" + means + "\n"
    lines = ["s," + ",".join(repr(float(t)) for t in result.t_values)]
    for i, s in enumerate(result.s_values):
        label = "multigranular" if s is None else repr(float(s))
        lines.append(label + "," + ",".join(_csv_cell(v) for v in result.mean_accuracy[i]))
    return "\n".join(lines) + "\n"


def emit_results(result: RunResult | SweepGrid, format: str, sink) -> None:
    """Write a RunResult or SweepGrid to `sink` as CSV or JSON.

    Grid CSV: header row of T values, then one row per s value. JSON mirrors
    the full structure including seeds and per-run data. Output depends only
    on the result, so reruns from the same seed are byte-identical.
    """
    fmt = format.lower()
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {format!r} (expected csv or json)")
    if not isinstance(result, (RunResult, SweepGrid)):
        raise TypeError(f"cannot emit {type(result).__name__}")
    if fmt == "csv":
        text = _to_csv(result)
    else:
        text = json.dumps(result.to_dict(), indent=2) + "\n"
    path = Path(sink)
    path.write_text(text, encoding="utf-8")
