"""Tsetlin Machine classifiers: clause-based learning automata with a classic
global-specificity variant and a multigranular variant that removes the
specificity hyperparameter, plus datasets and a deterministic experiment
harness.
"""

from .core import (
    DEFAULT_N_STATES,
    MultiClassTsetlinMachine,
    TsetlinMachine,
    threshold_to_votes,
)
from .data import (
    BinaryDataset,
    FixedPointEncoding,
    binarize_features,
    binarize_value,
    bundled_iris_path,
    generate_synthetic,
    synthetic_labels,
    load_dataset,
    load_iris,
    save_dataset,
    split_dataset,
)
from .harness import (
    ClassicMachine,
    ExperimentSpec,
    FixtureSource,
    IrisSource,
    MultigranularMachine,
    RunResult,
    SplitPlan,
    SweepGrid,
    SyntheticSource,
    emit_results,
    grid_search,
    mix_seed,
    run_experiment,
    splitmix64,
    train_model,
)
from .multigranular import (
    MultigranularTsetlinMachine,
    SpecificityRange,
    specificity_schedule,
)
from .persistence import load_model, save_model

__version__ = "0.1.0"

__all__ = [
    "BinaryDataset",
    "ClassicMachine",
    "DEFAULT_N_STATES",
    "ExperimentSpec",
    "FixedPointEncoding",
    "FixtureSource",
    "IrisSource",
    "MultiClassTsetlinMachine",
    "MultigranularMachine",
    "MultigranularTsetlinMachine",
    "RunResult",
    "SpecificityRange",
    "SplitPlan",
    "SweepGrid",
    "SyntheticSource",
    "TsetlinMachine",
    "binarize_features",
    "binarize_value",
    "bundled_iris_path",
    "emit_results",
    "generate_synthetic",
    "synthetic_labels",
    "grid_search",
    "load_dataset",
    "load_iris",
    "load_model",
    "mix_seed",
    "run_experiment",
    "save_dataset",
    "save_model",
    "specificity_schedule",
    "split_dataset",
    "splitmix64",
    "threshold_to_votes",
    "train_model",
]
