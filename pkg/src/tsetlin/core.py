"""Binary and multiclass Tsetlin Machine classifiers.

A machine is a pool of conjunctive clauses over binary features. Each clause
owns two automata per feature (one for the literal, one for its negation) and
votes with its polarity when its conjunction is satisfied. Classification is
a clamped majority vote; learning is per-example Type I / Type II feedback
dispatched with probabilities shaped by the voting target T.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import _kernels

DEFAULT_N_STATES = 100


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _kernel_rng(rng: np.random.Generator) -> np.ndarray:
    # xorshift128+ state; low bound 1 keeps it nonzero
    return rng.integers(1, 2**63, size=2, dtype=np.uint64)


def _as_bits(X, n_features: int) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.uint8)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != n_features:
        raise ValueError(f"expected inputs with {n_features} features, got shape {X.shape}")
    if X.size and X.max() > 1:
        raise ValueError("inputs must be binary (0/1)")
    return X


def threshold_to_votes(threshold: float, n_clauses: int) -> int:
    """Resolve a relative voting target to an absolute clamp, round half up, min 1."""
    return max(1, int(np.floor(threshold * n_clauses + 0.5)))


class TsetlinMachine:
    """Binary classifier: m/2 positive and m/2 negative conjunctive clauses.

    `specificity` is a scalar applied to every clause, or a length-m array
    giving each clause its own value (see `MultigranularTsetlinMachine`).
    """

    def __init__(
        self,
        n_features: int,
        n_clauses: int,
        threshold: float,
        specificity,
        n_states: int = DEFAULT_N_STATES,
    ):
        if n_features < 1:
            raise ValueError("n_features must be >= 1")
        if n_clauses < 2 or n_clauses % 2:
            raise ValueError("n_clauses must be even and >= 2")
        if not 0.0 < threshold <= 1.0:
            raise ValueError("threshold must lie in (0, 1]")
        if n_states < 1:
            raise ValueError("n_states must be >= 1")
        spec = np.asarray(specificity, dtype=np.float64)
        if spec.ndim == 0:
            spec = np.full(n_clauses, float(spec))
        if spec.shape != (n_clauses,):
            raise ValueError("specificity must be a scalar or one value per clause")
        if spec.min() < 1.0:
            raise ValueError("specificity must be >= 1 everywhere")
        self.n_features = n_features
        self.n_clauses = n_clauses
        self.threshold = float(threshold)
        self.n_states = n_states
        self.specificity = spec
        # all automata start excluding, one step from the include boundary
        self.states = np.full((n_clauses, 2 * n_features), n_states, dtype=np.int32)

    @property
    def threshold_abs(self) -> int:
        return threshold_to_votes(self.threshold, self.n_clauses)

    def clause_outputs(self, X, train_mode: bool = False) -> np.ndarray:
        """Per-example clause outputs, shape (rows, n_clauses)."""
        X = _as_bits(X, self.n_features)
        out = np.empty((X.shape[0], self.n_clauses), dtype=np.uint8)
        _kernels.clause_outputs(self.states, X, self.n_states, not train_mode, out)
        return out

    def vote_sums(self, X, train_mode: bool = False) -> np.ndarray:
        """Positive-clause fires minus negative-clause fires, per example."""
        X = _as_bits(X, self.n_features)
        out = np.empty(X.shape[0], dtype=np.int64)
        _kernels.vote_sums(self.states, X, self.n_states, not train_mode, out)
        return out

    def predict(self, X) -> np.ndarray:
        # vote tie resolves to class 1
        return (self.vote_sums(X) >= 0).astype(np.uint8)

    def score(self, X, y) -> float:
        y = np.asarray(y)
        return float(np.mean(self.predict(X) == y))

    def train_on_example(self, x, y: int, rng) -> None:
        """One feedback step: clamp the vote, then dispatch Type I / Type II."""
        rng = _as_generator(rng)
        x = _as_bits(x, self.n_features)[0]
        if y not in (0, 1):
            raise ValueError("label must be 0 or 1")
        outputs = np.empty(self.n_clauses, dtype=np.uint8)
        _kernels.train_on_example(
            self.states, self.specificity, x, int(y),
            self.threshold_abs, self.n_states, _kernel_rng(rng), outputs,
        )

    def fit_epoch(self, X, y, rng) -> None:
        """One pass over the data in an order shuffled by `rng`."""
        rng = _as_generator(rng)
        X = _as_bits(X, self.n_features)
        y = np.ascontiguousarray(y, dtype=np.uint8)
        if y.shape != (X.shape[0],):
            raise ValueError("labels must be one per input row")
        if y.size and y.max() > 1:
            raise ValueError("labels must be 0 or 1")
        order = rng.permutation(X.shape[0])
        _kernels.train_epoch(
            self.states, self.specificity, X, y, order,
            self.threshold_abs, self.n_states, _kernel_rng(rng),
        )

    def fit(self, X, y, epochs: int, rng=None) -> "TsetlinMachine":
        rng = _as_generator(rng)
        for _ in range(epochs):
            self.fit_epoch(X, y, rng)
        return self

    def included_literals(self) -> list[list[int]]:
        """Literal indices in each clause's conjunction (2k -> x_k, 2k+1 -> not x_k)."""
        return [list(np.flatnonzero(row > self.n_states)) for row in self.states]

    def clause_text(self, j: int, feature_names: Sequence[str] | None = None) -> str:
        """Human-readable conjunction for clause j."""
        names = feature_names or [f"x{k + 1}" for k in range(self.n_features)]
        parts = []
        for lit in np.flatnonzero(self.states[j] > self.n_states):
            name = names[lit >> 1]
            parts.append(f"~{name}" if lit & 1 else name)
        return " & ".join(parts) if parts else "<empty>"


class MultiClassTsetlinMachine:
    """One clause pool per class; predicts the label with the largest vote sum."""

    def __init__(self, machines: Sequence[TsetlinMachine], labels: Sequence | None = None):
        if not machines:
            raise ValueError("need at least one class pool")
        first = machines[0]
        for m in machines:
            if (m.n_features, m.n_clauses, m.n_states, m.threshold_abs) != (
                first.n_features, first.n_clauses, first.n_states, first.threshold_abs,
            ):
                raise ValueError("all class pools must share shape and threshold")
        self.machines = list(machines)
        self.labels = list(labels) if labels is not None else list(range(len(machines)))
        if len(self.labels) != len(self.machines):
            raise ValueError("labels must be one per pool")
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def n_features(self) -> int:
        return self.machines[0].n_features

    def vote_sums(self, X) -> np.ndarray:
        """Vote sums per example and class, shape (rows, n_classes)."""
        return np.stack([m.vote_sums(X) for m in self.machines], axis=1)

    def predict(self, X) -> np.ndarray:
        # np.argmax takes the first maximum, so ties go to the lowest label index
        idx = np.argmax(self.vote_sums(X), axis=1)
        return np.asarray(self.labels)[idx]

    def score(self, X, y) -> float:
        y = np.asarray(y)
        return float(np.mean(self.predict(X) == y))

    def _label_positions(self, y) -> np.ndarray:
        try:
            return np.array([self._label_index[lab] for lab in np.asarray(y).tolist()], dtype=np.int64)
        except KeyError as e:
            raise ValueError(f"unknown label {e.args[0]!r}") from None

    def fit_epoch(self, X, y, rng) -> None:
        """Each example trains its own pool toward 1 and one random other pool toward 0."""
        rng = _as_generator(rng)
        X = _as_bits(X, self.n_features)
        y_pos = self._label_positions(y)
        if y_pos.shape != (X.shape[0],):
            raise ValueError("labels must be one per input row")
        n_classes = len(self.machines)
        order = rng.permutation(X.shape[0])
        if n_classes == 1:
            y_ones = np.ones(X.shape[0], dtype=np.uint8)
            _kernels.train_epoch(
                self.machines[0].states, self.machines[0].specificity, X, y_ones, order,
                self.machines[0].threshold_abs, self.machines[0].n_states, _kernel_rng(rng),
            )
            return
        own = y_pos[order]
        draws = rng.integers(0, n_classes - 1, size=X.shape[0])
        negatives = draws + (draws >= own)
        pool_states = np.stack([m.states for m in self.machines])
        pool_spec = np.stack([m.specificity for m in self.machines])
        _kernels.train_epoch_multi(
            pool_states, pool_spec, X, y_pos.astype(np.uint8), order, negatives,
            self.machines[0].threshold_abs, self.machines[0].n_states, _kernel_rng(rng),
        )
        for i, m in enumerate(self.machines):
            m.states[...] = pool_states[i]

    def fit(self, X, y, epochs: int, rng=None) -> "MultiClassTsetlinMachine":
        rng = _as_generator(rng)
        for _ in range(epochs):
            self.fit_epoch(X, y, rng)
        return self
