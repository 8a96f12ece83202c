import hashlib
import json

import numpy as np
import pytest

from freezelab.cli import RunConfig, UsageError, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_zeros_hermite(capsys):
    code, out, _ = run(capsys, "zeros", "--family", "hermite", "--n", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# ") and lines[1] == "index,zero"
    vals = [float(line.split(",")[1]) for line in lines[2:]]
    assert np.allclose(vals, [1.224744871391589, 0.0, -1.224744871391589], atol=1e-15)


def test_zeros_laguerre_and_verify(capsys):
    code, out, _ = run(capsys, "zeros", "--family", "laguerre", "--alpha", "1", "--n", "1")
    assert code == 0 and out.splitlines()[2] == "1,2"
    code, out, _ = run(capsys, "zeros", "--family", "laguerre", "--alpha", "1", "--n", "5", "--verify")
    report = json.loads(out.splitlines()[-1])
    assert code == 0 and report["passed"]


@pytest.mark.parametrize("argv", [
    ["zeros", "--family", "hermite", "--n", "0"],
    ["zeros", "--family", "chebyshev", "--n", "3"],
    ["zeros", "--n", "3"],
    ["sample", "--law", "cauchy-a", "--n", "0", "--k", "1"],
    ["verify", "--suite", "nosuch"],
    ["converge", "--mode", "ratio", "--n", "2", "--k-grid", ""],
    ["converge", "--mode", "ratio", "--n", "2", "--k-grid", "10,5"],
    ["cov", "--system", "B", "--n", "2", "--flavor", "cauchy"],
    [],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err


def test_cov_outputs(capsys):
    code, out, _ = run(capsys, "cov", "--system", "A", "--flavor", "bessel", "--n", "2")
    data = json.loads(out)
    assert code == 0 and np.allclose(data["eigenvalues"], [1, 2]) and abs(data["determinant"] - 2) < 1e-12
    code, out, _ = run(capsys, "cov", "--system", "A", "--flavor", "cauchy", "--n", "2")
    data = json.loads(out)
    assert code == 0 and np.allclose(data["eigenvalues"], [3, 12]) and abs(data["determinant"] - 36) < 1e-10
    code, out, _ = run(capsys, "cov", "--system", "D", "--n", "2")
    assert code == 0 and abs(json.loads(out)["s_nn"] - 2) < 1e-12
    code, out, _ = run(capsys, "cov", "--system", "B", "--n", "3", "--nu", "0.5")
    assert code == 0 and json.loads(out)["passed"]


def test_sample_deterministic_files(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        assert run(capsys, "sample", "--law", "cauchy-a", "--n", "2", "--k", "1", "--count", "1000",
                   "--seed", "7", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    header = json.loads(a.read_text().splitlines()[0])
    assert header["count"] == 1000 and header["seed"] == 7 and header["config"]["law"] == "cauchy-a"


def test_sample_limit_support(capsys):
    code, out, _ = run(capsys, "sample", "--law", "limit-b", "--n", "2", "--nu", "2", "--count", "100",
                       "--format", "csv")
    rows = np.loadtxt(out.splitlines()[2:], delimiter=",")
    r = np.sqrt(2 * np.array([3 + np.sqrt(3), 3 - np.sqrt(3)]))
    assert code == 0 and rows.shape == (100, 2) and np.all(rows @ r > 0)


def test_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("FREEZELAB_SEED", "11")
    _, out1, _ = run(capsys, "sample", "--law", "bessel-a", "--n", "2", "--k", "1", "--count", "5")
    _, out2, _ = run(capsys, "sample", "--law", "bessel-a", "--n", "2", "--k", "1", "--count", "5", "--seed", "11")
    assert out1 == out2
    monkeypatch.setenv("FREEZELAB_SEED", "x")
    assert run(capsys, "sample", "--law", "bessel-a", "--n", "2", "--k", "1")[0] == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "zeros", "family": "hermite", "n": 2}))
    code, out, _ = run(capsys, "--config", str(cfg), "zeros", "--n", "4")
    assert code == 0 and len(out.splitlines()) == 6
    assert json.loads(out.splitlines()[0][2:])["n"] == 4
    cfg.write_text(json.dumps({"command": "zeros", "bogus": 1}))
    assert run(capsys, "--config", str(cfg))[0] == 2
    cfg.write_text("{not json")
    assert run(capsys, "--config", str(cfg), "zeros")[0] == 2
    assert run(capsys, "--config", str(tmp_path / "missing.json"), "zeros")[0] == 3


def test_run_config_roundtrip():
    cfg = RunConfig(command="sample", n=2, k=1.0, k_grid=[1.0, 2.0])
    assert RunConfig.from_dict(json.loads(cfg.to_json())) == cfg
    with pytest.raises(UsageError):
        RunConfig.from_dict({"color": "red"})


def test_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "zeros", "--family", "hermite", "--n", "2", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 3 and "cannot write" in err


def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "identities", "--n", "10")
    data = json.loads(out)
    assert code == 0 and data["passed"] and data["failing"] == []


def test_verify_clt_quick(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "clt", "--system", "A", "--n", "2", "--k", "200",
                       "--seed", "1", "--count", "2000", "--permutations", "100")
    assert code == 0 and json.loads(out)["passed"]


def test_converge_ratio(capsys):
    code, out, _ = run(capsys, "converge", "--mode", "ratio", "--system", "A", "--n", "2", "--k-grid",
                       "100,1000,10000,1000000")
    lines = out.splitlines()
    assert code == 0 and lines[1].startswith("k,ratio_x0")
    assert len(lines) == 6


def test_converge_weak_quick(capsys):
    code, out, _ = run(capsys, "converge", "--mode", "weak", "--system", "B", "--n", "2", "--nu", "2",
                       "--k-grid", "10,1000", "--count", "1000", "--permutations", "100")
    rows = np.loadtxt(out.splitlines()[2:], delimiter=",")
    assert code == 0 and rows.shape == (2, 3)


COMMANDS = [
    ["zeros", "--family", "hermite", "--n", "7", "--verify"],
    ["cov", "--system", "A", "--flavor", "cauchy", "--n", "4"],
    ["sample", "--law", "limit-d", "--n", "3", "--count", "300", "--seed", "5", "--format", "csv"],
    ["verify", "--suite", "identities", "--n", "6"],
    ["converge", "--mode", "ratio", "--n", "3", "--k-grid", "10,100"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
def test_byte_determinism(capsys, argv):
    digests = set()
    for _ in range(2):
        _, out, _ = run(capsys, *argv)
        digests.add(hashlib.sha256(out.encode()).hexdigest())
    assert len(digests) == 1
