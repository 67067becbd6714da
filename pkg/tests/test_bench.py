import numpy as np
import pytest

from robust_cic.bench.records import BenchRecord, RecordCollector, read_records, summarize, write_records, write_summary
from robust_cic.bench.report import format_time, summary_table
from robust_cic.bench.runner import Cell, MethodSettings, cell_seed, production_pairs, run_cell, run_cells
from robust_cic.datagen import BIVARIATE_GAMMA, ILLUSTRATIVE_PAIR, generate_quad, latent_spec
from robust_cic.errors import InvalidInputError
from robust_cic.estimators import CIC, MAX_SLICED, OT, ROT, SINKHORN
from robust_cic.plugins.bench_d_plugin import run_varying_d
from robust_cic.plugins.bench_k_plugin import run_varying_k
from robust_cic.plugins.bench_n_plugin import run_varying_n
from robust_cic.plugins.illustrative_plugin import run_illustrative
from robust_cic.plugins.lambda_sweep_plugin import run_lambda_sweep


def make_record(**overrides):
    values = dict(
        experiment="demo",
        method=ROT,
        n=100,
        d=2,
        k=10,
        lam=None,
        seed=0,
        runtime_s=0.125,
        ot_distance=1.5,
        meta={"direction": [0.6, 0.8]},
    )
    values.update(overrides)
    return BenchRecord(**values)


def comparable(records):
    return [(r.key, r.ot_distance, r.meta) for r in records]


def test_record_validation():
    with pytest.raises(InvalidInputError):
        make_record(runtime_s=-1.0)
    with pytest.raises(InvalidInputError):
        make_record(ot_distance=-0.1)


def test_collector_rejects_duplicate_keys():
    collector = RecordCollector()
    collector.add(make_record())
    collector.add(make_record(seed=1))
    with pytest.raises(InvalidInputError):
        collector.add(make_record(runtime_s=3.0))
    assert len(collector) == 2


def test_records_round_trip(tmp_path):
    records = [
        make_record(),
        make_record(method=SINKHORN, k=None, lam=30.0, runtime_s=0.1 + 0.2, meta={"converged": True}),
        make_record(method=CIC, k=None, ot_distance=1 / 3, meta={}),
    ]
    path = write_records(records, tmp_path / "records.csv")
    assert path.read_text().splitlines()[0] == "experiment,method,n,d,k,lambda,seed,runtime_s,ot_distance,meta"
    loaded = read_records(path)
    assert loaded == records
    assert [r.meta for r in loaded] == [r.meta for r in records]
    assert [r.runtime_s for r in loaded] == [r.runtime_s for r in records]


def test_read_records_reports_bad_line(tmp_path):
    path = write_records([make_record()], tmp_path / "records.csv")
    path.write_text(path.read_text() + "demo,rot,x,2,10,,1,0.1,0.2,{}\n")
    with pytest.raises(InvalidInputError) as excinfo:
        read_records(path)
    assert excinfo.value.line == 3


def test_summary_matches_recomputed_statistics(tmp_path):
    distances = [1.0, 2.0, 4.0]
    runtimes = [0.5, 0.25, 0.75]
    records = [make_record(seed=i, ot_distance=dist, runtime_s=rt) for i, (dist, rt) in enumerate(zip(distances, runtimes))]
    records.append(make_record(method=OT, k=None))
    summary = summarize(records)
    assert len(summary) == 2
    rot = summary[summary["method"] == ROT].iloc[0]
    assert rot["count"] == 3
    assert rot["distance_mean"] == pytest.approx(np.mean(distances), abs=1e-9)
    assert rot["distance_std"] == pytest.approx(np.std(distances), abs=1e-9)
    assert rot["runtime_mean"] == pytest.approx(np.mean(runtimes), abs=1e-9)
    assert write_summary(summary, tmp_path / "summary.csv").exists()
    assert summary_table(summary).row_count == 2


def test_format_time():
    assert format_time(2.5) == "2.50s"
    assert format_time(0.0125) == "12.50ms"
    assert format_time(0.000004) == "4μs"


def test_cell_seed_depends_on_seed_and_cell():
    assert cell_seed(3, "a") == cell_seed(3, "a")
    assert cell_seed(3, "a") != cell_seed(3, "b")
    assert cell_seed(3, "a") != cell_seed(4, "a")


def test_production_pairs_are_seeded_per_dimension():
    pairs = production_pairs([2, 3], seed=5)
    assert pairs[2].d == 2 and pairs[3].d == 3
    np.testing.assert_array_equal(production_pairs([3], seed=5)[3].H0, pairs[3].H0)


def test_run_cell_scores_every_method():
    quad = generate_quad(latent_spec(BIVARIATE_GAMMA), ILLUSTRATIVE_PAIR, n=40, seed=1)
    result = run_cell("demo", quad, (CIC, OT, SINKHORN, ROT, MAX_SLICED), MethodSettings(k=5, ascent_iters=5), keep_samples=True)
    assert [r.method for r in result.records] == [CIC, OT, SINKHORN, ROT, MAX_SLICED]
    assert all(r.ot_distance >= 0 for r in result.records)
    by_method = {r.method: r for r in result.records}
    assert by_method[ROT].k == 5
    assert by_method[MAX_SLICED].k == 5
    assert by_method[SINKHORN].lam == 30.0
    assert "converged" in by_method[SINKHORN].meta
    assert set(result.samples) == {CIC, OT, SINKHORN, ROT, MAX_SLICED}


def test_metric_subsample_is_recorded():
    quad = generate_quad(latent_spec(BIVARIATE_GAMMA), ILLUSTRATIVE_PAIR, n=60, seed=1)
    result = run_cell("demo", quad, (CIC,), MethodSettings(metric_subsample=20))
    assert result.records[0].meta["metric_subsample"] == 20


def test_parallel_cells_match_sequential_cells():
    spec = latent_spec(BIVARIATE_GAMMA)

    def cells():
        return [
            Cell(f"seed={seed}", lambda seed=seed: run_cell("demo", generate_quad(spec, ILLUSTRATIVE_PAIR, 30, seed), (CIC, ROT), MethodSettings()))
            for seed in range(4)
        ]

    sequential, parallel = RecordCollector(), RecordCollector()
    run_cells(cells(), sequential, jobs=1)
    run_cells(cells(), parallel, jobs=3)
    assert comparable(sequential.records) == comparable(parallel.records)


def test_run_illustrative_counts_and_figures(tmp_path):
    records, figures = run_illustrative(BIVARIATE_GAMMA, 40, [0, 1], MethodSettings(k=5), figures_dir=tmp_path)
    assert len(records) == 6
    assert {r.method for r in records} == {CIC, OT, ROT}
    assert len(figures) == 3
    assert all(path.suffix == ".svg" and path.exists() for path in figures)


def test_run_illustrative_is_reproducible():
    first, _ = run_illustrative(BIVARIATE_GAMMA, 30, [3], MethodSettings(k=4))
    second, _ = run_illustrative(BIVARIATE_GAMMA, 30, [3], MethodSettings(k=4))
    assert comparable(first) == comparable(second)


def test_run_illustrative_rejects_tiny_n():
    with pytest.raises(InvalidInputError):
        run_illustrative(BIVARIATE_GAMMA, 1, [0])


def test_run_varying_n_record_count():
    records = run_varying_n(BIVARIATE_GAMMA, [20, 30], [0, 1], lam=30.0, settings=MethodSettings(k=3))
    assert len(records) == 2 * 4 * 2
    assert {r.lam for r in records if r.method == SINKHORN} == {30.0}


def test_run_varying_d_shares_pair_across_seeds():
    records = run_varying_d([2, 3], n=20, seeds=[0, 1], settings=MethodSettings(k=3))
    assert len(records) == 2 * 4 * 2
    pair_seeds = {(r.d, r.meta["production_seed"]) for r in records}
    assert len(pair_seeds) == 2


def test_run_varying_k_record_count():
    records = run_varying_k([3], [2, 4], [5], n=20, runs=2, seed=7)
    assert len(records) == (2 + 1) * 2
    assert {r.seed for r in records} == {7, 8}
    assert all(r.meta["dataset_seed"] == 7 for r in records)
    assert {r.k for r in records if r.method == MAX_SLICED} == {5}


def test_run_lambda_sweep_record_count():
    records = run_lambda_sweep([10.0, 90.0], n_values=[20], d_values=[3], seeds=[0], d_n=20, settings=MethodSettings(k=3))
    # per dataset: one rot record and one sinkhorn record per lambda
    assert len(records) == 2 * (1 + 2)
    for record in records:
        if record.method == SINKHORN and record.meta["converged"]:
            assert record.meta["marginal_violation"] <= 1e-6
