import io

import pytest

from probal import (
    SweepSpec,
    ba_tree,
    grn_pipeline,
    probal_upper_bound,
    rows_to_csv,
    run_sweep,
    scaling_bench,
    write_edge_list,
)
from probal.sweep import CSV_COLUMNS


def strip_time(rows):
    return [{k: v for k, v in r.items() if k != "wall_time_s"} for r in rows]


def small_spec(**kw):
    base = dict(
        model="gw",
        prior="uniform",
        n_values=(10, 14),
        m_values=(1, 2, 3),
        replicates=3,
        seed=11,
        algorithms=("probal", "probal-minimax", "optimal-bayes", "optimal-minimax"),
    )
    base.update(kw)
    return SweepSpec(**base)


def test_sweep_schema_and_determinism():
    rows1 = run_sweep(small_spec())
    rows2 = run_sweep(small_spec())
    assert strip_time(rows1) == strip_time(rows2)
    csv_text = rows_to_csv(rows1)
    assert csv_text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert len(rows1) == 2 * 3 * 3 * 4


def test_sweep_threads_do_not_change_rows():
    serial = strip_time(run_sweep(small_spec()))
    parallel = strip_time(run_sweep(small_spec(), threads=4))
    assert serial == parallel


def test_sweep_probal_never_beats_optimal():
    rows = run_sweep(small_spec())
    by_key = {}
    for r in rows:
        by_key[(r["n"], r["m"], r["rep"], r["algorithm"])] = r
    for (n, m, rep, alg), r in by_key.items():
        if alg == "probal":
            opt = by_key[(n, m, rep, "optimal-bayes")]
            assert float(r["loss"]) >= float(opt["loss"]) - 1e-9
        if alg == "probal-minimax":
            opt = by_key[(n, m, rep, "optimal-minimax")]
            assert float(r["loss"]) >= float(opt["loss"]) - 1e-9


def test_sweep_rows_satisfy_upper_bound():
    rows = run_sweep(small_spec())
    for r in rows:
        if r["algorithm"].startswith("probal") and r["upper_bound"] != "":
            assert float(r["loss"]) <= float(r["upper_bound"]) + 1e-9


def test_sweep_mean_loss_monotone_in_budget():
    spec = small_spec(n_values=(12,), m_values=(1, 2, 3, 4, 5), algorithms=("probal",))
    rows = run_sweep(spec)
    means = []
    for m in spec.m_values:
        vals = [float(r["loss"]) for r in rows if r["m"] == m]
        means.append(sum(vals) / len(vals))
    assert all(a >= b - 1e-9 for a, b in zip(means, means[1:]))


def test_sweep_empty_algorithms():
    rows = run_sweep(small_spec(algorithms=()))
    assert rows == []
    assert rows_to_csv(rows).splitlines() == [",".join(CSV_COLUMNS)]


def test_sweep_error_rows_recorded():
    # brute force over cap: the row is kept with an error tag
    spec = small_spec(n_values=(14,), m_values=(3,), algorithms=("optimal-bayes",), cap=5)
    rows = run_sweep(spec)
    assert all(r["error"] == "SearchSpaceTooLargeError" for r in rows)
    assert all(r["loss"] == "" for r in rows)


def test_rows_to_csv_stream():
    buf = io.StringIO()
    rows_to_csv(run_sweep(small_spec(algorithms=("probal",))), buf)
    assert buf.getvalue().startswith("model,prior")


def test_grn_pipeline_small(tmp_path):
    # two components: a path (as directed edges with duplicates and a self
    # loop) plus a chordless square that must be skipped
    f = tmp_path / "g.edges"
    f.write_text(
        "a b\nb a\nb c\nc d\nd e\ne e\n"
        "w x\nx y\ny z\nz w\n"
    )
    rep = grn_pipeline(f, [0, 1, 2], prior_kind="degree")
    assert rep.dropped_self_loops == 1
    assert rep.merged_duplicate_edges == 1
    assert len(rep.skipped) == 1 and rep.skipped[0][1] == 4
    assert rep.component_sizes == (5,)
    assert rep.points[0].normalized == pytest.approx(1.0)
    values = [p.normalized for p in rep.points]
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


def test_grn_pipeline_single_tree(tmp_path):
    tree = ba_tree(60, 3)
    f = tmp_path / "t.edges"
    write_edge_list(tree, f)
    rep = grn_pipeline(f, list(range(6)), prior_kind="degree")
    assert rep.total_vertices == 60
    assert rep.points[0].normalized == pytest.approx(1.0)
    curve = [p.normalized for p in rep.points]
    assert all(a >= b - 1e-12 for a, b in zip(curve, curve[1:]))
    assert curve[-1] < curve[0]


def test_grn_contracted_component(tmp_path):
    # triangle with a pendant contracts to a 2-vertex tree of weight 4
    f = tmp_path / "c.edges"
    f.write_text("a b\nb c\nc a\na d\n")
    rep = grn_pipeline(f, [0, 1], prior_kind="uniform")
    assert rep.component_sizes == (4,)
    assert rep.points[0].surrogate == pytest.approx(4.0)
    assert rep.points[1].surrogate < 4.0


def test_scaling_bench_smoke():
    rep = scaling_bench([60, 120], m=4, seed=2, repeats=2)
    assert len(rep.rows) == 2
    assert all(t >= 0 for _, t in rep.rows)
    assert rep.slope is not None


def test_upper_bound_used_by_sweep_matches_module():
    assert probal_upper_bound(5, 40) == (2 / 3) ** 2 * 40
