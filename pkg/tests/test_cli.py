import json
import os
import subprocess
import sys

PY = [sys.executable, "-m", "stlinkage.cli"]


def run(args, inp=None):
    return subprocess.run(PY + args, input=inp, capture_output=True, text=True)


def test_solve_deterministic_given_seed(triangle_path):
    doc = json.dumps(
        {
            "n": 4,
            "edges": [[0, 1], [1, 2], [2, 3], [0, 3]],
            "colors": [1, 2, 3, 4],
            "weights": [1, 1, 1, 1],
            "query": {"S": [0], "T": [2], "p": 1, "k": 3, "w": 3},
        }
    )
    a = run(["--seed", "1", "solve", "-"], inp=doc)
    b = run(["--seed", "1", "solve", "-"], inp=doc)
    assert a.returncode == 0, a.stderr
    assert a.stdout == b.stdout
    out = json.loads(a.stdout)
    assert out["feasible"] and out["total_length"] == 3 and out["seed"] == 1
    assert out["trials_used"] > 0


def test_t_cycle_on_committed_triangle(triangle_path):
    r = run(["--seed", "4", "t-cycle", triangle_path, "--terminals", "0,1,2"])
    assert r.returncode == 0, r.stderr
    out = json.loads(r.stdout)
    assert out["total_length"] == 3
    assert sorted(out["cycles"][0]) == [0, 1, 2]


def test_gen_pipe_solve_smoke():
    gen = run(["--seed", "5", "gen", "--n", "12", "--k", "4", "--colors", "12"])
    assert gen.returncode == 0, gen.stderr
    solved = run(["--seed", "6", "solve", "-"], inp=gen.stdout)
    assert solved.returncode in (0, 3), solved.stderr
    doc = json.loads(solved.stdout)
    assert doc["seed"] == 6


def test_exit_codes():
    assert run(["solve", "/no/such/file.json"]).returncode == 2
    assert run(["solve", "-"], inp="{broken").returncode == 2
    bad_semantic = json.dumps({"n": 2, "edges": [[0, 1]], "colors": [1, 1], "weights": [0, 1]})
    assert run(["solve", "-"], inp=bad_semantic).returncode == 2

    tri = json.dumps({"n": 3, "edges": [[0, 1], [1, 2], [0, 2]],
                      "colors": [1, 2, 3], "weights": [1, 1, 1],
                      "query": {"S": [0], "T": [2], "p": 1, "k": 4, "w": 4}})
    r = run(["--seed", "1", "solve", "-"], inp=tri)
    assert r.returncode == 3
    assert json.loads(r.stdout)["feasible"] is False


def test_plain_format():
    tri = json.dumps({"n": 3, "edges": [[0, 1], [1, 2], [0, 2]],
                      "colors": [1, 2, 3], "weights": [1, 1, 1],
                      "query": {"S": [0], "T": [2], "p": 1, "k": 2, "w": 2}})
    r = run(["--seed", "1", "--format", "plain", "solve", "-"], inp=tri)
    assert r.returncode == 0
    assert "feasible: True" in r.stdout
    assert "seed: 1" in r.stdout


def test_oracle_subcommands(triangle_path):
    tri = json.dumps({"n": 3, "edges": [[0, 1], [1, 2], [0, 2]],
                      "colors": [1, 2, 3], "weights": [1, 1, 1],
                      "query": {"S": [0], "T": [2], "p": 1, "k": 2, "w": 2}})
    r = run(["oracle", "min-linkage", "-"], inp=tri)
    assert r.returncode == 0 and json.loads(r.stdout)["total_length"] == 2
    r2 = run(["oracle", "t-cycle", triangle_path, "--terminals", "0,1,2"])
    assert json.loads(r2.stdout)["total_length"] == 3


def test_framework_subcommand():
    doc = json.dumps({
        "n": 4,
        "edges": [[0, 1], [1, 2], [2, 3]],
        "colors": [1, 2, 3, 4],
        "weights": [1, 1, 1, 1],
        "query": {"S": [0], "T": [3], "p": 1, "k": 2, "w": 2},
        "matroid": {"field": {"p": 5, "degree": 1}, "rows": 2,
                    "entries": [[1, 0, 1, 0], [0, 1, 0, 1]]},
    })
    r = run(["--seed", "2", "framework", "-"], inp=doc)
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["total_length"] == 4


def test_longest_linkage_det_subcommand():
    doc = json.dumps({
        "n": 5,
        "directed": True,
        "arcs": [[0, 1], [1, 4], [0, 2], [2, 3], [3, 4]],
        "query": {"S": [0], "T": [4], "p": 1, "k": 4, "w": 4},
    })
    r = run(["longest-linkage-det", "-"], inp=doc)
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["paths"] == [[0, 2, 3, 4]]


def test_bench_writes_reports(tmp_path):
    out = str(tmp_path / "reports")
    r = run(["--seed", "5", "bench", "--n", "12", "--k-values", "4,5",
             "--layers", "8", "--out-dir", out])
    assert r.returncode == 0, r.stderr
    assert os.path.exists(os.path.join(out, "bench.csv"))
    assert os.path.getsize(os.path.join(out, "bench.png")) > 1000
    with open(os.path.join(out, "bench.csv")) as fh:
        header = fh.readline().strip()
    assert header == "kind,n,k,layers,seconds"


def test_usage_error():
    assert run(["no-such-command"]).returncode == 2
