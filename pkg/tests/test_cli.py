import json

import pytest

from probal.cli import main


@pytest.fixture
def path5_file(tmp_path):
    f = tmp_path / "path5.edges"
    f.write_text("1 2\n2 3\n3 4\n4 5\n")
    return f


def run(args):
    return main([str(a) for a in args])


def test_design_golden(path5_file, tmp_path):
    out = tmp_path / "design.json"
    assert run(["design", "--graph", path5_file, "--budget", 2, "--out", out]) == 0
    payload = json.loads(out.read_text())
    assert payload["interventions"] == ["3", "2"]
    assert payload["rounds"] == 2
    assert payload["surrogate_loss"] == pytest.approx(1.0)


def test_design_byte_stable_across_runs_and_threads(path5_file, tmp_path):
    outs = []
    for i, threads in enumerate((1, 4, 1)):
        out = tmp_path / f"d{i}.json"
        assert run([
            "design", "--graph", path5_file, "--budget", 2,
            "--trace", "--threads", threads, "--out", out,
        ]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_optimal_golden(path5_file, tmp_path):
    out = tmp_path / "opt.json"
    assert run(["optimal", "--graph", path5_file, "--budget", 2, "--out", out]) == 0
    payload = json.loads(out.read_text())
    assert payload["interventions"] == ["2", "4"]
    assert payload["loss"] == pytest.approx(0.6)
    assert payload["lower_bound"] == pytest.approx(0.6)


def test_optimal_minimax(path5_file, tmp_path):
    out = tmp_path / "opt.json"
    assert run([
        "optimal", "--graph", path5_file, "--budget", 2, "--mode", "minimax", "--out", out,
    ]) == 0
    payload = json.loads(out.read_text())
    assert payload["interventions"] == ["2", "4"]
    assert payload["loss"] == 1.0


def test_eval_with_oracle(path5_file, tmp_path):
    out = tmp_path / "eval.json"
    assert run([
        "eval", "--graph", path5_file, "--interventions", "1,5",
        "--root", "3", "--oracle", "--out", out,
    ]) == 0
    payload = json.loads(out.read_text())
    assert payload["per_root_loss"]["3"] == 1
    assert payload["oracle"]["count"] == 2
    assert payload["oracle"]["consistent_roots"] == ["2", "3", "4"]
    assert payload["surrogate_loss"] == pytest.approx(1.8)


def test_eval_file_prior(path5_file, tmp_path):
    prior = tmp_path / "prior.tsv"
    prior.write_text("1\t0.2\n2\t0.2\n3\t0.2\n4\t0.2\n5\t0.2\n")
    out = tmp_path / "eval.json"
    assert run([
        "eval", "--graph", path5_file, "--interventions", "3",
        "--prior", f"file:{prior}", "--out", out,
    ]) == 0
    payload = json.loads(out.read_text())
    assert payload["average_loss"] == pytest.approx(0.8)


def test_design_contracts_cysts(tmp_path):
    f = tmp_path / "cyst.edges"
    f.write_text("a b\nb c\nc a\na d\nd e\n")
    out = tmp_path / "design.json"
    assert run(["design", "--graph", f, "--budget", 1, "--decomposition", "--out", out]) == 0
    payload = json.loads(out.read_text())
    assert payload["cysts"] == 1
    assert payload["n_contracted"] == 3
    if "a" in payload["interventions"]:
        assert set(payload["interventions_expanded"]) >= {"a", "b", "c"}
    assert payload["decomposition"]["cysts"] == [["a", "b", "c"]]


def test_gen_manifest_and_determinism(tmp_path):
    out1 = tmp_path / "batch1"
    out2 = tmp_path / "batch2"
    for out in (out1, out2):
        assert run([
            "gen", "--model", "gw", "--n", 30, "--max-degree", 4,
            "--count", 3, "--seed", 5, "--out", out,
        ]) == 0
    names = sorted(p.name for p in out1.iterdir())
    assert "manifest.json" in names and len(names) == 4
    for name in names:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    manifest = json.loads((out1 / "manifest.json").read_text())
    assert len(manifest["files"]) == 3


def test_bench_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    assert run([
        "bench", "--model", "gw", "--n", "10,12", "--m", "1,2",
        "--reps", 2, "--algorithms", "probal,optimal-bayes", "--out", out,
    ]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("model,prior,n,m,seed")
    assert len(lines) == 1 + 2 * 2 * 2 * 2


def test_bench_scaling(tmp_path):
    out = tmp_path / "times.csv"
    assert run(["bench", "--scaling", "--n", "50,100", "--m-single", 3, "--out", out]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,seconds"
    assert len(lines) == 3


def test_grn_command(tmp_path):
    f = tmp_path / "g.edges"
    f.write_text("a b\nb c\nc d\nd e\ne f\n")
    out = tmp_path / "curve.csv"
    assert run(["grn", "--graph", f, "--budgets", "0,1,2", "--out", out]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "budget,surrogate,normalized,allocation"
    assert len(lines) == 4
    assert float(lines[1].split(",")[2]) == pytest.approx(1.0)


def test_exit_code_missing_file(tmp_path, capsys):
    assert run(["design", "--graph", tmp_path / "nope.edges", "--budget", 1]) == 1
    assert "error" in capsys.readouterr().err


def test_exit_code_bad_format(tmp_path, capsys):
    f = tmp_path / "bad.edges"
    f.write_text("a b c\n")
    assert run(["eval", "--graph", f]) == 1
    capsys.readouterr()


def test_exit_code_disconnected_design(tmp_path, capsys):
    f = tmp_path / "two.edges"
    f.write_text("a b\nc d\n")
    assert run(["design", "--graph", f, "--budget", 1]) == 1
    assert "grn" in capsys.readouterr().err


def test_exit_code_cap(path5_file, capsys):
    assert run(["optimal", "--graph", path5_file, "--budget", 2, "--cap", 3]) == 1
    capsys.readouterr()
