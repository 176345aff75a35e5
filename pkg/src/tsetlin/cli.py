"""Command-line interface: dataset generation, training, evaluation, grid
search, and reproduction of the published accuracy tables.

Relative input data paths are also looked up under $TSETLIN_DATA_DIR when
they do not exist relative to the working directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .data import generate_synthetic, load_dataset, load_iris, save_dataset
from .harness import (
    ClassicMachine,
    ExperimentSpec,
    FixtureSource,
    IrisSource,
    MultigranularMachine,
    SplitPlan,
    SyntheticSource,
    emit_results,
    grid_search,
    run_experiment,
    train_model,
)
from .multigranular import SpecificityRange
from .persistence import load_model, save_model

DATA_DIR_ENV = "TSETLIN_DATA_DIR"

# Published reference accuracies (percent) from "The Multi-Granular Tsetlin
# Machine" evaluation: synthetic mixed-granularity task, 300-example train
# and test sets, means over 10 runs, after 200 and 500 epochs.
# Row: (clauses, tm_s, tm_T, tm_200, tm_500, mtm_T, mtm_200, mtm_500)
TABLE1_PUBLISHED = (
    (10, 110.0, 0.10, 75.7, 78.2, 0.16, 76.1, 78.0),
    (20, 100.0, 0.06, 76.6, 78.2, 0.08, 78.8, 78.4),
    (50, 50.0, 0.04, 88.4, 89.2, 0.04, 88.5, 88.2),
    (100, 60.0, 0.03, 94.3, 95.9, 0.02, 93.2, 95.2),
    (500, 35.0, 0.01, 97.8, 98.0, 0.01, 98.0, 98.0),
)

# Iris, 10 random 80/20 splits x 10 runs, accuracy (percent) after 500
# epochs. Row: (label, kind, clauses, specificity-or-None, T, published)
TABLE2_PUBLISHED = (
    ("TM  m=100 s=5   T=0.20", "classic", 100, 5.0, 0.20, 95.2),
    ("TM  m=500 s=5   T=0.20", "classic", 500, 5.0, 0.20, 95.7),
    ("MTM m=100       T=0.05", "multigranular", 100, None, 0.05, 94.7),
    ("MTM m=500       T=0.03", "multigranular", 500, None, 0.03, 95.0),
)


def _resolve_input(path: str) -> str:
    p = Path(path)
    if p.is_absolute() or p.exists():
        return path
    base = os.environ.get(DATA_DIR_ENV)
    if base and (Path(base) / p).exists():
        return str(Path(base) / p)
    return path


def _load_spec(args) -> ExperimentSpec:
    spec = ExperimentSpec.from_json(Path(args.spec).read_text(encoding="utf-8"))
    for name in ("seed", "runs", "epochs", "clauses", "threshold"):
        value = getattr(args, name, None)
        if value is not None:
            spec = replace(spec, **{name: value})
    if getattr(args, "specificity", None) is not None:
        if not isinstance(spec.machine, ClassicMachine):
            raise ValueError("--specificity applies to classic machines only")
        spec = replace(spec, machine=ClassicMachine(args.specificity))
    if getattr(args, "range_low", None) is not None or getattr(args, "range_high", None) is not None:
        if not isinstance(spec.machine, MultigranularMachine):
            raise ValueError("--range-low/--range-high apply to multigranular machines only")
        current = spec.machine.range
        srange = SpecificityRange(
            args.range_low if args.range_low is not None else current.lower,
            args.range_high if args.range_high is not None else current.upper,
        )
        spec = replace(spec, machine=MultigranularMachine(srange))
    dataset = spec.dataset
    if isinstance(dataset, IrisSource) and dataset.path is not None:
        spec = replace(spec, dataset=replace(dataset, path=_resolve_input(dataset.path)))
    elif isinstance(dataset, FixtureSource):
        spec = replace(spec, dataset=replace(dataset, path=_resolve_input(dataset.path)))
    return spec


def _print_table(headers: list[str], rows: list[list[str]]) -> None:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    print(line)
    print("-" * len(line))
    for row in rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)))


def _cmd_synthesize(args) -> int:
    ds = generate_synthetic(args.count, np.random.default_rng(args.seed))
    save_dataset(ds, args.out)
    print(f"wrote {len(ds)} synthetic examples to {args.out}")
    return 0


def _cmd_train(args) -> int:
    spec = _load_spec(args)
    result = run_experiment(spec)
    units = result.accuracies.shape[0]
    if args.table:
        headers = ["units", "T_abs"] + [f"epoch {c}" for c in result.checkpoints]
        row = [str(units), str(result.threshold_abs)]
        row += [f"{m * 100:.1f}% (std {s * 100:.1f})" for m, s in zip(result.means, result.stds)]
        _print_table(headers, [row])
    else:
        final = result.checkpoints[-1]
        print(
            f"accuracy {result.final_mean:.4f} (std {float(result.stds[-1]):.4f}) "
            f"at epoch {final} over {units} unit(s), T_abs={result.threshold_abs}"
        )
    if args.out:
        machine, _ = train_model(spec)
        save_model(machine, args.out)
        print(f"model saved to {args.out}")
    if args.results:
        emit_results(result, args.format, args.results)
        print(f"results written to {args.results}")
    return 0


def _cmd_eval(args) -> int:
    machine = load_model(args.model)
    path = _resolve_input(args.data)
    with open(path, encoding="utf-8") as fh:
        head = ""
        for line in fh:
            if line.strip():
                head = line
                break
    ds = load_iris(path) if "," in head else load_dataset(path)
    acc = machine.score(ds.inputs, ds.labels)
    print(f"accuracy {acc:.6f}")
    return 0


def _cmd_sweep(args) -> int:
    spec = _load_spec(args)
    s_values = [float(v) for v in args.s_values.split(",")] if args.s_values else None
    t_values = [float(v) for v in args.t_values.split(",")] if args.t_values else None
    grid = grid_search(spec, s_values, t_values)
    if args.out:
        emit_results(grid, args.format, args.out)
        print(f"surface written to {args.out}")
    if args.table or not args.out:
        headers = ["s"] + [f"T={t:g}" for t in grid.t_values]
        rows = []
        for i, s in enumerate(grid.s_values):
            label = "multigranular" if s is None else f"{s:g}"
            cells = [
                "-" if np.isnan(v) else f"{v * 100:.1f}%" for v in grid.mean_accuracy[i]
            ]
            rows.append([label] + cells)
        _print_table(headers, rows)
    best = grid.best
    if best is not None:
        s_label = "multigranular" if best[0] is None else f"s={best[0]:g}"
        print(f"best cell: {s_label} T={best[1]:g} accuracy {best[2] * 100:.1f}%")
    if grid.missing:
        print(f"{len(grid.missing)} cell(s) failed and are missing from the surface")
    return 0


def _reproduce_table1(args) -> int:
    epochs = args.epochs or 500
    checkpoints = (epochs,)
    rows = []
    for m, tm_s, tm_t, _, tm_pub, mtm_t, _, mtm_pub in TABLE1_PUBLISHED:
        tm_spec = ExperimentSpec(
            machine=ClassicMachine(tm_s), clauses=m, threshold=tm_t, epochs=epochs,
            dataset=SyntheticSource(300), runs=args.runs, seed=args.seed,
            checkpoints=checkpoints,
        )
        mtm_spec = ExperimentSpec(
            machine=MultigranularMachine(), clauses=m, threshold=mtm_t, epochs=epochs,
            dataset=SyntheticSource(300), runs=args.runs, seed=args.seed,
            checkpoints=checkpoints,
        )
        tm_acc = run_experiment(tm_spec).final_mean * 100
        mtm_acc = run_experiment(mtm_spec).final_mean * 100
        rows.append([
            str(m), f"{tm_pub:.1f}%", f"{tm_acc:.1f}%", f"{mtm_pub:.1f}%", f"{mtm_acc:.1f}%",
        ])
        print(f"clauses={m}: TM {tm_acc:.1f}% (published {tm_pub:.1f}%), "
              f"MTM {mtm_acc:.1f}% (published {mtm_pub:.1f}%)", file=sys.stderr)
    print()
    print(f"Synthetic task, {args.runs} runs, {epochs} epochs "
          f"(published values: 10 runs, 500 epochs)")
    _print_table(["clauses", "published TM", "ours TM", "published MTM", "ours MTM"], rows)
    return 0


def _reproduce_table2(args) -> int:
    epochs = args.epochs or 500
    rows = []
    for label, kind, m, s, t, published in TABLE2_PUBLISHED:
        machine = ClassicMachine(s) if kind == "classic" else MultigranularMachine()
        spec = ExperimentSpec(
            machine=machine, clauses=m, threshold=t, epochs=epochs,
            dataset=IrisSource(), runs=args.runs,
            splits=SplitPlan(args.splits, 0.2), seed=args.seed,
            checkpoints=(epochs,),
        )
        acc = run_experiment(spec).final_mean * 100
        rows.append([label, f"{published:.1f}%", f"{acc:.1f}%"])
        print(f"{label}: {acc:.1f}% (published {published:.1f}%)", file=sys.stderr)
    print()
    print(f"Iris, {args.splits} splits x {args.runs} runs, {epochs} epochs "
          f"(published values: 10 x 10, 500 epochs)")
    _print_table(["configuration", "published", "ours"], rows)
    return 0


def _cmd_reproduce(args) -> int:
    if args.table == "table1":
        return _reproduce_table1(args)
    return _reproduce_table2(args)


def _add_override_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="override the spec seed")
    p.add_argument("--runs", type=int, help="override the run count")
    p.add_argument("--epochs", type=int, help="override the epoch count")
    p.add_argument("--clauses", type=int, help="override the clause count")
    p.add_argument("--threshold", type=float, help="override the relative voting target")
    p.add_argument("--specificity", type=float, help="override s (classic machines only)")
    p.add_argument("--range-low", type=float, help="override the specificity range lower end (multigranular)")
    p.add_argument("--range-high", type=float, help="override the specificity range upper end (multigranular)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsetlin",
        description="Tsetlin Machine and Multigranular Tsetlin Machine experiments.",
        epilog=f"Relative data paths are also resolved against ${DATA_DIR_ENV}.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="write a synthetic dataset fixture")
    p.add_argument("--count", type=int, required=True, help="number of examples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output path (fixture text format)")
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("train", help="run one experiment spec; optionally save a model")
    p.add_argument("--spec", required=True, help="experiment spec JSON file")
    _add_override_flags(p)
    p.add_argument("--out", help="save the (run 0, split 0) model here")
    p.add_argument("--results", help="write the aggregated RunResult here")
    p.add_argument("--format", choices=("csv", "json"), default="json", help="results format")
    p.add_argument("--table", action="store_true", help="print a table-style summary")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="load a model and print accuracy on a dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True, help="fixture text file or Iris-style CSV")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("sweep", help="grid-search specificity and threshold")
    p.add_argument("--spec", required=True, help="base experiment spec JSON file")
    _add_override_flags(p)
    p.add_argument("--s-values", help="comma-separated specificity axis (classic only)")
    p.add_argument("--t-values", required=True, help="comma-separated threshold axis")
    p.add_argument("--out", help="write the surface here")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="surface format")
    p.add_argument("--table", action="store_true", help="print the surface as a table")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("reproduce", help="rerun the published table configurations")
    p.add_argument("table", choices=("table1", "table2"))
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--splits", type=int, default=10, help="Iris split count (table2)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--epochs", type=int, help="override the 500-epoch protocol")
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
