"""Multigranular clauses: a fixed specificity ladder instead of a global s.

Each clause gets its own specificity from a linear schedule spanning a
coarse-to-fine range, so the pool covers frequent and rare patterns at once
and the specificity hyperparameter disappears from the configuration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_N_STATES, TsetlinMachine


@dataclass(frozen=True)
class SpecificityRange:
    lower: float = 2.0
    upper: float = 200.0

    def __post_init__(self):
        if not 1.0 <= self.lower <= self.upper:
            raise ValueError("need 1 <= lower <= upper")


def specificity_schedule(n_clauses: int, srange: SpecificityRange = SpecificityRange()) -> np.ndarray:
    """s_j = (u - l) * (m - j) / (m - 1) + l for j = 1..m: u down to l, equally spaced."""
    if n_clauses < 2:
        raise ValueError("schedule needs at least 2 clauses")
    m = n_clauses
    j = np.arange(1, m + 1, dtype=np.float64)
    return (srange.upper - srange.lower) * (m - j) / (m - 1) + srange.lower


class MultigranularTsetlinMachine(TsetlinMachine):
    """Tsetlin Machine whose configuration has no specificity knob.

    The schedule is computed over m/2 indices and applied identically to the
    positive and the negative polarity group, so both output classes get the
    full coarse-to-fine range.
    """

    def __init__(
        self,
        n_features: int,
        n_clauses: int,
        threshold: float,
        specificity_range: SpecificityRange = SpecificityRange(),
        n_states: int = DEFAULT_N_STATES,
    ):
        if n_clauses < 2 or n_clauses % 2:
            raise ValueError("n_clauses must be even and >= 2")
        if n_clauses == 2:
            half = np.array([specificity_range.upper])
        else:
            half = specificity_schedule(n_clauses // 2, specificity_range)
        super().__init__(
            n_features, n_clauses, threshold,
            np.concatenate([half, half]), n_states,
        )
        self.specificity_range = specificity_range
