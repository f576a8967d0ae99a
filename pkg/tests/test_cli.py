import csv
import io
import json

import mpmath as mp
import pytest

from icehankel import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_parse_args():
    cfg = cli.parse_args(["partition", "--gamma", "1.0471975512", "--t", "0", "--n-max", "10"])
    assert cfg.command == "partition" and cfg.n_max == 10 and cfg.params is not None
    cfg = cli.parse_args(["verify"])
    assert cfg.command == "verify" and cfg.criteria == [] and cfg.digits == 30
    with pytest.raises(cli.UsageError, match="--bogus"):
        cli.parse_args(["partition", "--gamma", "1.0", "--bogus"])
    with pytest.raises(cli.UsageError, match="needs --gamma"):
        cli.parse_args(["recurrence"])
    with pytest.raises(cli.UsageError):
        cli.parse_args(["verify", "12"])


def test_env_default_digits(monkeypatch):
    monkeypatch.setenv("ICEHANKEL_DEFAULT_DIGITS", "17")
    assert cli.parse_args(["asm"]).digits == 17
    monkeypatch.setenv("ICEHANKEL_DEFAULT_DIGITS", "many")
    with pytest.raises(cli.UsageError):
        cli.parse_args(["asm"])


def test_exit_codes(capsys):
    assert cli.main(["enumerate", "--n", "9"]) == 2
    assert cli.main(["enumerate", "--n", "3", "--cap", "9"]) == 0
    assert cli.main(["partition", "--gamma", "2.0"]) == 2
    assert cli.main(["partition", "--gamma", "1.0", "--frobnicate"]) == 2
    assert cli.main(["verify", "11"]) == 3
    assert cli.main(["verify", "5", "6"]) == 0
    capsys.readouterr()


def test_partition_free_fermion(capsys):
    code, out = run(capsys, "partition", "--gamma", "pi/4", "--t", "0.2", "--n-max", "15")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 15
    with mp.workprec(128):
        for r in rows:
            assert abs(mp.mpf(r["Z_N"]) - 1) < mp.mpf(10) ** -28
            assert int(r["digits"]) == 30


def test_asymptotics_special_point(capsys):
    code, out = run(capsys, "asymptotics", "--gamma", "pi/6", "--t", "0", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    vals = {(r["name"], r["j"]): r["value"] for r in doc["rows"]}
    assert vals[("kappa_exact", "")] == "1/18"
    with mp.workprec(128):
        assert abs(mp.mpf(vals[("c_j", 1)]) - mp.pi**2 / 72) < 1e-10
        assert abs(mp.mpf(vals[("f", "")]) - mp.log(mp.mpf(3) / 4)) < mp.mpf(10) ** -29
    assert doc["meta"]["gamma"] == "pi/6"


def test_serialization_keeps_digits(capsys):
    code, out = run(capsys, "recurrence", "--gamma", "pi/3", "--n-max", "8", "--digits", "40", "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    with mp.workprec(200):
        for r in rows[1:]:
            n = r["n"]
            want = mp.mpf(n * n * (9 * n * n - 1)) / (4 * n * n - 1)
            assert isinstance(r["R_n"], str)
            assert abs(mp.mpf(r["R_n"]) / want - 1) < mp.mpf(10) ** -(r["digits"] - 1)


def test_other_subcommands(capsys, tmp_path):
    out_file = tmp_path / "eq.csv"
    assert cli.main(["equilibrium", "--gamma", "1.0", "--t", "0.3", "--n", "7", "--out", str(out_file)]) == 0
    rows = list(csv.DictReader(out_file.open()))
    assert len(rows) == 7 and all(float(r["rho"]) > 0 for r in rows)
    code, out = run(capsys, "asm", "--n-max", "7", "--format", "json")
    assert [r["A_N"] for r in json.loads(out)["rows"]] == [1, 2, 7, 42, 429, 7436, 218348]
    code, out = run(capsys, "fit-kappa", "--gamma", "pi/3")
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["target_kappa"] == "-5/36" and abs(float(row["slope"]) + 5 / 36) < 1e-3
    code, out = run(capsys, "enumerate", "--n", "4", "--gamma", "1.0", "--t", "0.3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["meta"]["agree"] and doc["meta"]["asm_count"] == 42


def test_verify_deterministic(capsys):
    _, a = run(capsys, "verify", "5", "6", "7")
    _, b = run(capsys, "verify", "5", "6", "7", "--threads", "3")
    assert a == b and a.count("PASS") == 3
