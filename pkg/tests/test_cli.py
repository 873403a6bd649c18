import json
import subprocess
import sys

import pytest

from gnmalpha.cli import main, read_config
from gnmalpha.graph import InputError, sample_gnm
from gnmalpha.rng import SeedSpec


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sample_and_alpha_roundtrip(tmp_path, capsys):
    f = tmp_path / "g.txt"
    assert run(capsys, "sample", "--n", "12", "--m", "20", "--seed", "3", "--out", str(f))[0] == 0
    assert f.read_bytes() == sample_gnm(12, 20, SeedSpec(3, 0)).to_text().encode()
    code, out, _ = run(capsys, "alpha", str(f))
    assert code == 0
    d = json.loads(out)
    assert d["status"] == "ok" and len(d["witness"]) == d["alpha"]


def test_budget_exit_code(tmp_path, capsys):
    f = tmp_path / "g.txt"
    f.write_text(sample_gnm(60, 200, SeedSpec(1, 0)).to_text())
    code, out, _ = run(capsys, "alpha", str(f), "--budget", "1")
    assert code == 3 and json.loads(out)["status"] == "budget"


def test_input_errors(tmp_path, capsys):
    assert run(capsys, "predict")[0] == 1
    assert run(capsys, "alpha", str(tmp_path / "missing.txt"))[0] == 1
    assert run(capsys, "enumerate", "--beta", "2", "--gamma", "2", "--kappa", "5")[0] == 1
    assert run(capsys, "verify", "nosuch")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    bad = tmp_path / "g.txt"
    bad.write_text("3 1\n0 0\n")
    assert run(capsys, "alpha", str(bad))[0] == 1


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nbeta = 2\ngamma = 3\nkappa = 5\n")
    code, out, _ = run(capsys, "enumerate", "--config", str(cfg), "--kappa", "4")
    assert code == 0
    d = json.loads(out)
    assert (d["beta"], d["gamma"], d["kappa"]) == (2, 3, 4)
    assert d["mode"] == "exact-int"
    cfg.write_text("bogus = 1\n")
    with pytest.raises(InputError):
        read_config(str(cfg))
    assert run(capsys, "enumerate", "--config", str(cfg))[0] == 1


def test_enumerate_json_fields(capsys):
    code, out, _ = run(capsys, "enumerate", "--beta", "2", "--gamma", "3", "--kappa", "4")
    d = json.loads(out)
    assert code == 0 and set(d) >= {"beta", "gamma", "kappa", "c", "log_C", "log_f", "mode"}


def test_phi_exact(capsys):
    code, out, _ = run(capsys, "phi-exact", "--n", "6", "--m", "9", "--k", "2", "--r", "0")
    d = json.loads(out)
    assert code == 0 and d["phi_fraction"] == "3/1001"


def test_predict_deterministic(capsys):
    a = run(capsys, "predict", "--n", "1000", "--m", "7944")
    b = run(capsys, "predict", "--n", "1000", "--m", "7944")
    assert a[0] == 0 and a[1] == b[1]
    d = json.loads(a[1])
    assert d["k_V"] >= 1 and "regime" in d


def test_count(tmp_path, capsys):
    f = tmp_path / "g.txt"
    f.write_text("4 2\n0 1\n2 3\n")
    code, out, _ = run(capsys, "count", str(f), "--k", "2", "--r", "0")
    assert code == 0 and json.loads(out)["k"] == 2


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "janson")
    assert code == 0 and json.loads(out)["passed"]


def test_concentration_outputs_deterministic(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        base = tmp_path / name
        code, _, _ = run(capsys, "experiment", "concentration", "--n", "30", "--trials", "6",
                         "--seed", "5", "--out", str(base))
        assert code == 0
        outs.append((base.with_suffix(".csv").read_bytes(), base.with_suffix(".json").read_bytes()))
    assert outs[0] == outs[1]
    csv_bytes, json_bytes = outs[0]
    assert b"\r" not in csv_bytes and b"\r" not in json_bytes
    assert csv_bytes.splitlines()[0] == b"trial,seed,alpha,nodes,status"
    assert len(csv_bytes.splitlines()) == 7
    assert json.loads(json_bytes)["trials"] == 6


def test_xkr(capsys):
    code, out, _ = run(capsys, "experiment", "xkr", "--n", "7", "--m", "8", "--k", "3", "--r", "0",
                       "--trials", "200", "--seed", "1")
    d = json.loads(out)
    assert code == 0 and d["trials"] == 200 and d["exact"] > 0


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "gnmalpha", "enumerate", "--beta", "2", "--gamma", "2",
                          "--kappa", "4"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["log_C"] == 0.0
