import json
import os
import subprocess

import pytest

CLI = os.environ.get("LOCALFLOW_CLI", "localflow")


def run(*args, cwd):
    return subprocess.run([CLI, *map(str, args)], cwd=cwd, capture_output=True, text=True)


@pytest.fixture
def edge(tmp_path):
    (tmp_path / "edge.txt").write_text("2 1\n0 1\n")
    (tmp_path / "unit.txt").write_text("1\n1 0 1\n1 1 -1\n")
    (tmp_path / "heavy.txt").write_text("1\n1 0 2\n1 1 -2\n")
    return tmp_path


def test_feasible_edge_gives_flow(edge):
    r = run("solve", "edge.txt", "unit.txt", "--eps", 0.2, "--out", "flow.json", cwd=edge)
    assert r.returncode == 0, r.stderr
    artifact = json.loads((edge / "flow.json").read_text())
    assert artifact["kind"] == "flow"
    assert list(artifact["flows"][0]) == ["0"]
    assert run("verify", "edge.txt", "unit.txt", "flow.json", cwd=edge).returncode == 0


def test_overloaded_edge_gives_verifiable_certificate(edge):
    r = run("solve", "edge.txt", "heavy.txt", "--eps", 0.2, "--out", "cut.json", "--stats", "stats.json", cwd=edge)
    assert r.returncode == 2, r.stderr
    assert json.loads((edge / "cut.json").read_text())["kind"] == "cut-certificate"
    assert json.loads((edge / "stats.json").read_text())["totals"]["result"] == "certificate"
    assert run("verify", "edge.txt", "heavy.txt", "cut.json", cwd=edge).returncode == 0
    # |b(S)| = boundary for the unit demand: strictness rejects it.
    r = run("verify", "edge.txt", "unit.txt", "cut.json", cwd=edge)
    assert r.returncode == 3
    assert "FAILED" in r.stdout


def test_corrupted_flow_fails_verification(edge):
    assert run("solve", "edge.txt", "unit.txt", "--out", "flow.json", cwd=edge).returncode == 0
    artifact = json.loads((edge / "flow.json").read_text())
    artifact["flows"][0]["0"] = 0.25
    (edge / "bad.json").write_text(json.dumps(artifact))
    r = run("verify", "edge.txt", "unit.txt", "bad.json", cwd=edge)
    assert r.returncode == 3
    assert "residual" in r.stdout


def test_usage_errors(edge):
    assert run("solve", "edge.txt", "unit.txt", "--eps", 1.5, cwd=edge).returncode == 1
    (edge / "broken.txt").write_text("2 1\n0 x\n")
    r = run("solve", "broken.txt", "unit.txt", cwd=edge)
    assert r.returncode == 1
    assert "broken.txt:2" in r.stderr
    assert run("solve", cwd=edge).returncode == 1
    assert run("frobnicate", cwd=edge).returncode == 1


def test_gen(tmp_path):
    r = run("gen", "path", "--n", 3, cwd=tmp_path)
    assert r.returncode == 0
    assert r.stdout == "3 2\n0 1\n1 2\n"

    args = ("gen", "random-regular", "--n", 100, "--d", 4, "--seed", 7)
    assert run(*args, "--out", "a.txt", cwd=tmp_path).returncode == 0
    assert run(*args, "--out", "b.txt", cwd=tmp_path).returncode == 0
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()

    r = run(*args, "--out", "g.txt", "--random-balanced", 10, 5, "--demand-out", "d.txt", cwd=tmp_path)
    assert r.returncode == 0
    lines = (tmp_path / "d.txt").read_text().split("\n")
    assert lines[0] == "1"
    values = [float(line.split()[2]) for line in lines[1:] if line]
    assert len(values) == 10
    assert sum(abs(v) for v in values) == pytest.approx(5.0, abs=1e-9)
    assert abs(sum(values)) <= 1e-9

    r = run("gen", "grid", "--rows", 2, "--cols", 2, "--out", "grid.txt", "--pairs", 1, 0, 3, 1, 2, 1, 2, 1,
            "--demand-out", "pairs.txt", cwd=tmp_path)
    assert r.returncode == 0
    assert (tmp_path / "pairs.txt").read_text().split("\n")[0] == "2"


def test_round_trip_on_generated_instances(tmp_path):
    for seed in range(1, 6):
        run("gen", "random-gnm", "--n", 30, "--m", 60, "--seed", seed, "--out", "g.txt",
            "--random-balanced", 6, 4, "--k", 2, "--demand-out", "d.txt", cwd=tmp_path)
        solved = run("solve", "g.txt", "d.txt", "--eps", 0.3, "--audit", "--out", "a.json", cwd=tmp_path)
        assert solved.returncode in (0, 2), solved.stderr
        assert run("verify", "g.txt", "d.txt", "a.json", cwd=tmp_path).returncode == 0


def test_bench_zero_sweep(tmp_path):
    r = run("bench", "zero", "--max-m", 20000, cwd=tmp_path)
    assert r.returncode == 0
    assert "work/iterations = 1.000" in r.stdout
