"""Hyperparameter surfaces: a 2-D search for the classic TM versus a 1-D
threshold search for the multigranular TM.

The classic machine's accuracy depends jointly on s and T, so finding a good
cell takes a full grid. The multigranular machine removes the s axis: its
whole search is one threshold sweep. Both surfaces are written as CSV.
"""

import tempfile
from pathlib import Path

from tsetlin import (
    ClassicMachine,
    ExperimentSpec,
    MultigranularMachine,
    SyntheticSource,
    emit_results,
    grid_search,
)

BASE = dict(clauses=100, threshold=0.1, epochs=100, dataset=SyntheticSource(300),
            runs=2, seed=21)
S_VALUES = (5.0, 20.0, 60.0, 120.0, 200.0)
T_VALUES = (0.01, 0.03, 0.1, 0.2)

classic = grid_search(ExperimentSpec(machine=ClassicMachine(10.0), **BASE),
                      S_VALUES, T_VALUES)
print("classic TM surface (rows: s, columns: T):")
for s, row in zip(classic.s_values, classic.mean_accuracy):
    print(f"  s={s:5.1f}: " + "  ".join(f"{v * 100:5.1f}%" for v in row))
s_best, t_best, acc = classic.best
print(f"best cell: s={s_best:g}, T={t_best:g} at {acc * 100:.1f}% "
      f"({len(S_VALUES) * len(T_VALUES)} cells searched)\n")

mtm = grid_search(ExperimentSpec(machine=MultigranularMachine(), **BASE),
                  t_values=T_VALUES)
print("multigranular threshold sweep (one row, no s axis):")
print("  " + "  ".join(f"T={t:g}: {v * 100:.1f}%" for t, v in zip(mtm.t_values, mtm.mean_accuracy[0])))
_, t_best, acc = mtm.best
print(f"best threshold {t_best:g} at {acc * 100:.1f}% "
      f"({len(T_VALUES)} cells searched)")

out_dir = Path(tempfile.mkdtemp(prefix="tsetlin_sweep_"))
emit_results(classic, "csv", out_dir / "classic_surface.csv")
emit_results(mtm, "csv", out_dir / "multigranular_sweep.csv")
print(f"\nwrote classic_surface.csv and multigranular_sweep.csv to {out_dir}")
