"""Experiment specs, deterministic runs, grid search, and result emission."""

import json
from dataclasses import replace

import numpy as np
import pytest

from tsetlin import (
    ClassicMachine,
    ExperimentSpec,
    FixtureSource,
    IrisSource,
    MultigranularMachine,
    RunResult,
    SpecificityRange,
    SplitPlan,
    SweepGrid,
    SyntheticSource,
    emit_results,
    generate_synthetic,
    grid_search,
    mix_seed,
    run_experiment,
    save_dataset,
    splitmix64,
    train_model,
)


def tiny_spec(**overrides) -> ExperimentSpec:
    base = dict(
        machine=ClassicMachine(3.0), clauses=10, threshold=0.2, epochs=3,
        dataset=SyntheticSource(60), runs=2, seed=5,
    )
    base.update(overrides)
    return ExperimentSpec(**base)


def test_seed_mixing_is_stable_and_order_sensitive():
    assert splitmix64(0) == splitmix64(0)
    assert 0 <= mix_seed(1, 2, 3) < 2**64
    assert mix_seed(1, 2) != mix_seed(2, 1)
    assert mix_seed(0) != mix_seed(0, 0)


def test_spec_json_round_trip():
    spec = tiny_spec(checkpoints=(1, 3))
    assert ExperimentSpec.from_json(spec.to_json()) == spec
    iris = tiny_spec(
        machine=MultigranularMachine(SpecificityRange(2.0, 50.0)),
        dataset=IrisSource(), splits=SplitPlan(4, 0.25),
    )
    assert ExperimentSpec.from_json(iris.to_json()) == iris
    fixture = tiny_spec(dataset=FixtureSource("data.txt"))
    assert ExperimentSpec.from_json(fixture.to_json()) == fixture


def test_spec_rejects_unknown_keys_at_every_level():
    doc = tiny_spec().to_dict()
    for mutate in (
        lambda d: d.update(epoch=5),
        lambda d: d["machine"].update(specificity_range=[2, 200]),
        lambda d: d["dataset"].update(rows=10),
    ):
        bad = json.loads(json.dumps(doc))
        mutate(bad)
        with pytest.raises(ValueError, match="unknown key"):
            ExperimentSpec.from_dict(bad)
    iris_doc = tiny_spec(dataset=IrisSource(), splits=SplitPlan(2)).to_dict()
    iris_doc["splits"]["stratified"] = True
    with pytest.raises(ValueError, match="unknown key.*splits"):
        ExperimentSpec.from_dict(iris_doc)


def test_spec_rejects_missing_keys_and_bad_kinds():
    doc = tiny_spec().to_dict()
    del doc["machine"]
    with pytest.raises(ValueError, match="missing key"):
        ExperimentSpec.from_dict(doc)
    doc = tiny_spec().to_dict()
    del doc["machine"]["specificity"]
    with pytest.raises(ValueError, match="missing key.*machine"):
        ExperimentSpec.from_dict(doc)
    doc = tiny_spec().to_dict()
    doc["machine"]["kind"] = "quantum"
    with pytest.raises(ValueError, match="unknown machine kind"):
        ExperimentSpec.from_dict(doc)
    doc = tiny_spec().to_dict()
    doc["dataset"] = {"kind": "mnist"}
    with pytest.raises(ValueError, match="unknown dataset kind"):
        ExperimentSpec.from_dict(doc)
    doc = tiny_spec().to_dict()
    doc["machine"] = {"kind": "multigranular", "range": {"lower": 2.0, "upper": 200.0}}
    with pytest.raises(ValueError, match="two-element array"):
        ExperimentSpec.from_dict(doc)
    doc["machine"]["range"] = [2.0, 50.0, 200.0]
    with pytest.raises(ValueError, match="two-element array"):
        ExperimentSpec.from_dict(doc)
    with pytest.raises(ValueError, match="JSON object"):
        ExperimentSpec.from_json("[1, 2]")


def test_spec_validation_aggregates_all_problems():
    with pytest.raises(ValueError) as err:
        tiny_spec(clauses=7, threshold=0.0, epochs=0)
    message = str(err.value)
    assert "clauses" in message and "threshold" in message and "epochs" in message


def test_spec_rejects_splits_on_synthetic_and_bad_checkpoints():
    with pytest.raises(ValueError, match="pre-split"):
        tiny_spec(splits=SplitPlan(3))
    with pytest.raises(ValueError, match="checkpoints"):
        tiny_spec(checkpoints=(5,))
    spec = tiny_spec(checkpoints=(3, 1, 3))
    assert spec.checkpoints == (1, 3)  # sorted, deduplicated
    assert tiny_spec().effective_checkpoints == (3,)


def test_run_experiment_is_bit_identical_across_calls():
    spec = tiny_spec(checkpoints=(1, 3))
    a = run_experiment(spec)
    b = run_experiment(spec)
    assert np.array_equal(a.accuracies, b.accuracies)
    assert a.checkpoints == b.checkpoints
    da, db = a.to_dict(), b.to_dict()
    da.pop("wall_clock_seconds")
    db.pop("wall_clock_seconds")
    assert da == db
    assert a.accuracies.shape == (2, 2)
    assert ((0.0 <= a.accuracies) & (a.accuracies <= 1.0)).all()


def test_adding_runs_extends_without_perturbing_earlier_units():
    short = run_experiment(tiny_spec(runs=2))
    long = run_experiment(tiny_spec(runs=4))
    assert np.array_equal(long.accuracies[:2], short.accuracies)


def test_adding_splits_extends_without_perturbing_earlier_units():
    base = dict(dataset=IrisSource(), runs=1, epochs=2, clauses=4, threshold=0.5)
    short = run_experiment(tiny_spec(splits=SplitPlan(2), **base))
    long = run_experiment(tiny_spec(splits=SplitPlan(3), **base))
    assert np.array_equal(long.accuracies[:2], short.accuracies)


def test_split_membership_is_shared_across_machine_configs():
    classic = tiny_spec(dataset=IrisSource(), splits=SplitPlan(2), epochs=1, clauses=4)
    mtm = replace(classic, machine=MultigranularMachine(), clauses=20, threshold=0.1)
    for split in range(2):
        _, test_a = train_model(classic, run=0, split=split)
        _, test_b = train_model(mtm, run=0, split=split)
        assert np.array_equal(test_a.inputs, test_b.inputs)
        assert np.array_equal(test_a.labels, test_b.labels)


def test_mean_and_std_aggregates_match_per_unit_data():
    result = run_experiment(tiny_spec(runs=3, checkpoints=(1, 2, 3)))
    assert np.allclose(result.means, result.accuracies.mean(axis=0), atol=1e-12)
    assert np.allclose(result.stds, result.accuracies.std(axis=0), atol=1e-12)
    assert result.final_mean == pytest.approx(float(result.means[-1]))
    assert result.wall_clock.shape == (3,)
    assert (result.wall_clock > 0).all()


def test_train_model_reproduces_the_harness_unit():
    spec = tiny_spec(runs=1)
    result = run_experiment(spec)
    machine, test = train_model(spec, run=0, split=0)
    assert machine.score(test.inputs, test.labels) == pytest.approx(
        float(result.accuracies[0, -1])
    )


def test_train_model_validates_split_index():
    spec = tiny_spec(dataset=IrisSource(), splits=SplitPlan(2), epochs=1, clauses=4)
    with pytest.raises(ValueError, match="split index"):
        train_model(spec, split=5)


def test_fixture_source_runs_through_the_harness(tmp_path):
    ds = generate_synthetic(40, np.random.default_rng(3))
    path = tmp_path / "train.txt"
    save_dataset(ds, path)
    spec = tiny_spec(dataset=FixtureSource(str(path)), runs=1, epochs=2)
    result = run_experiment(spec)  # no splits: trains and scores on the file
    assert result.accuracies.shape == (1, 1)
    assert 0.0 <= result.final_mean <= 1.0


def test_multiclass_dataset_uses_one_pool_per_class():
    spec = tiny_spec(dataset=IrisSource(), splits=SplitPlan(1), epochs=2,
                     clauses=10, threshold=0.2, runs=1)
    machine, test = train_model(spec)
    assert len(machine.machines) == 3
    assert set(machine.predict(test.inputs)) <= {0, 1, 2}


def test_grid_search_single_cell_matches_run_experiment():
    base = tiny_spec(runs=1)
    grid = grid_search(base, s_values=[3.0], t_values=[0.2])
    single = run_experiment(base)
    assert grid.mean_accuracy.shape == (1, 1)
    assert grid.mean_accuracy[0, 0] == pytest.approx(single.final_mean)
    assert grid.best == (3.0, 0.2, pytest.approx(single.final_mean))
    assert grid.cells[0][0].checkpoints == single.checkpoints


def test_grid_search_sweeps_both_axes_for_classic_machines():
    grid = grid_search(tiny_spec(runs=1, epochs=2), s_values=[2.0, 6.0], t_values=[0.1, 0.3])
    assert grid.mean_accuracy.shape == (2, 2)
    assert not grid.missing
    assert not np.isnan(grid.mean_accuracy).any()
    s, t, acc = grid.best
    assert s in (2.0, 6.0) and t in (0.1, 0.3)
    assert acc == np.nanmax(grid.mean_accuracy)


def test_grid_search_multigranular_is_threshold_only():
    base = tiny_spec(machine=MultigranularMachine(), runs=1, epochs=2)
    grid = grid_search(base, t_values=[0.1, 0.2])
    assert grid.s_values == (None,)
    assert grid.mean_accuracy.shape == (1, 2)
    with pytest.raises(ValueError, match="no specificity axis"):
        grid_search(base, s_values=[2.0], t_values=[0.1])


def test_grid_search_requires_axes():
    with pytest.raises(ValueError, match="t_values"):
        grid_search(tiny_spec())
    with pytest.raises(ValueError, match="s_values"):
        grid_search(tiny_spec(), t_values=[0.1])


def test_grid_search_records_failing_cells_as_missing():
    grid = grid_search(tiny_spec(runs=1, epochs=2), s_values=[3.0, 0.2], t_values=[0.1, 2.0])
    # s=0.2 and T=2.0 are invalid: only the (3.0, 0.1) cell can succeed
    assert set(grid.missing) == {(0, 1), (1, 0), (1, 1)}
    assert not np.isnan(grid.mean_accuracy[0, 0])
    assert np.isnan(grid.mean_accuracy).sum() == 3
    assert grid.best[0] == 3.0


def test_grid_best_is_none_when_every_cell_fails():
    grid = grid_search(tiny_spec(runs=1), s_values=[0.1], t_values=[2.0])
    assert grid.best is None
    assert grid.to_dict()["best"] is None


def test_run_result_csv_has_header_and_means(tmp_path):
    result = run_experiment(tiny_spec(checkpoints=(1, 3)))
    path = tmp_path / "result.csv"
    emit_results(result, "csv", path)
    lines = path.read_text().splitlines()
    assert lines[0] == "epoch_1,epoch_3"
    values = [float(v) for v in lines[1].split(",")]
    assert values == pytest.approx(list(result.means))
    assert len(lines) == 2


def test_grid_csv_layout_and_missing_cells(tmp_path):
    grid = grid_search(tiny_spec(runs=1, epochs=2), s_values=[3.0, 0.2], t_values=[0.1, 2.0])
    path = tmp_path / "grid.csv"
    emit_results(grid, "csv", path)
    lines = path.read_text().splitlines()
    assert len(lines) == 3
    assert lines[0] == "s,0.1,2.0"
    assert lines[1].startswith("3.0,") and lines[1].endswith(",")  # missing cell is empty
    assert lines[2] == "0.2,,"
    mtm = grid_search(tiny_spec(machine=MultigranularMachine(), runs=1, epochs=2),
                      t_values=[0.1])
    emit_results(mtm, "csv", path)
    assert path.read_text().splitlines()[1].startswith("multigranular,")


def test_json_emission_round_trips_the_full_structure(tmp_path):
    result = run_experiment(tiny_spec(checkpoints=(1, 3)))
    path = tmp_path / "result.json"
    emit_results(result, "json", path)
    assert json.loads(path.read_text()) == result.to_dict()
    grid = grid_search(tiny_spec(runs=1, epochs=2), s_values=[3.0], t_values=[0.1])
    gpath = tmp_path / "grid.json"
    emit_results(grid, "json", gpath)
    doc = json.loads(gpath.read_text())
    assert doc["s_values"] == [3.0]
    assert doc["cells"][0][0]["per_run_accuracy"] == grid.cells[0][0].accuracies.tolist()


def test_emission_is_byte_stable_for_equal_seeds(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_results(run_experiment(tiny_spec()), "csv", a)
    emit_results(run_experiment(tiny_spec()), "csv", b)
    assert a.read_bytes() == b.read_bytes()


def test_emission_rejects_unknown_formats_and_objects(tmp_path):
    result = run_experiment(tiny_spec())
    with pytest.raises(ValueError, match="unknown format"):
        emit_results(result, "yaml", tmp_path / "x.yaml")
    with pytest.raises(TypeError):
        emit_results({"raw": 1}, "csv", tmp_path / "x.csv")


def test_run_result_direct_construction_aggregates():
    acc = np.array([[0.5, 0.6], [0.7, 0.8]])
    result = RunResult(1, 2, (1, 2), acc, np.array([0.1, 0.2]))
    assert np.allclose(result.means, [0.6, 0.7])
    assert result.final_mean == pytest.approx(0.7)
    doc = result.to_dict()
    assert doc["per_run_accuracy"] == acc.tolist()


def test_sweep_grid_best_prefers_first_maximum():
    grid = SweepGrid(
        s_values=(2.0, 5.0), t_values=(0.1, 0.2),
        mean_accuracy=np.array([[0.9, np.nan], [0.4, 0.9]]),
        clauses=10, epochs=3, seed=0, cells=[[None] * 2, [None] * 2],
        missing=[(0, 1)],
    )
    assert grid.best == (2.0, 0.1, 0.9)
