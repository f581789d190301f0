import csv
import io
import json

import pytest

from charlier_sobolev.cli import digits_for, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_digits_rule():
    assert digits_for(512) == 143
    assert digits_for(64) == 9


def test_moments_json(capsys):
    code, out, _ = run(capsys, "moments", "--b", "0", "--z", "1", "--n", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    nu = doc["tables"]["nu"]
    assert len(nu) == 3
    assert nu[0].startswith("2.2795853023360672")
    assert nu[1].startswith("1.5906368546373290")
    assert doc["precision_bits"] == 512
    assert doc["params"] == {"b": "0", "z": "1", "lambda": "1"}


def test_moments_csv(capsys):
    code, out, _ = run(capsys, "moments", "--n", "3", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["n", "nu"]
    assert [r[0] for r in rows[1:]] == ["0", "1", "2", "3"]
    assert "\r\n" in out


def test_moments_digits_at_low_precision(capsys):
    _, out, _ = run(capsys, "moments", "--b", "0", "--n", "1", "--precision", "64")
    assert json.loads(out)["tables"]["nu"][0] == 2.2795853


@pytest.mark.parametrize(
    "argv, message",
    [
        (["--z", "-1"], "z must be positive"),
        (["--b", "-2"], "b must be greater than -1"),
        (["--lambda", "-1"], "lambda must be non-negative"),
        (["--precision", "32"], "precision"),
        (["--n", "0"], "n must be"),
    ],
)
def test_invalid_params_exit_2(capsys, argv, message):
    code, _, err = run(capsys, "moments", *argv)
    assert code == 2 and message in err


def test_coeffs_columns(capsys):
    code, out, _ = run(capsys, "coeffs", "--n", "6", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert rows[0]["gamma"] == "0"
    assert rows[1]["a"] == "0"
    assert set(rows[0]) == {"n", "beta", "gamma", "h", "htilde", "a", "xi"}


def test_coeffs_both_routes(capsys):
    code, out, _ = run(capsys, "coeffs", "--n", "15", "--route", "both")
    doc = json.loads(out)
    assert code == 0
    disc = doc["tables"]["rel_discrepancy"]
    assert all(float(d) < 1e-20 for d in disc[1:])
    assert doc["tables"]["lf_diverged_at"] is None


def test_coeffs_lf_divergence_exit_3(capsys):
    code, out, err = run(capsys, "coeffs", "--n", "30", "--route", "lf", "--precision", "128")
    assert code == 3
    assert json.loads(out)["tables"]["lf_diverged_at"] <= 30


def test_polys(capsys):
    code, out, _ = run(capsys, "polys", "--n", "3", "--b", "0", "--z", "2", "--lambda", "0")
    tables = json.loads(out)["tables"]
    assert code == 0
    assert set(tables) == {"P_factorial", "P_monomial", "S_factorial", "S_monomial"}
    assert tables["P_factorial"][0] == [1]
    assert tables["P_monomial"][1] == tables["P_factorial"][1]
    assert tables["P_factorial"] == tables["S_factorial"]


def test_verify_defaults_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--out", str(a)]) == 0
    assert main(["verify", "--out", str(b), "--threads", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert set(doc) == {"params", "precision_bits", "checks", "tables"}
    assert all(set(c) >= {"name", "value", "target", "tolerance", "pass"} for c in doc["checks"])


def test_verify_under_precision_exit_1(capsys):
    code, out, _ = run(capsys, "verify", "--precision", "64", "--n", "25")
    assert code == 1
    assert any(not c["pass"] for c in json.loads(out)["checks"])


def test_asymptotics(capsys):
    code, out, _ = run(capsys, "asymptotics", "--window", "30:60")
    doc = json.loads(out)
    checks = {c["name"]: c for c in doc["checks"]}
    assert code == 0
    assert checks["slope.gamma"]["value"] <= -3.5
    assert checks["plateau.d2"]["pass"]
    assert checks["limit.h_next_over_htilde"]["target"] == 1
    assert checks["limit.htilde_over_h"]["target"] == 1
    assert {"n", "residual", "normalized"} == set(doc["tables"]["gamma"][0])


def test_asymptotics_bad_window(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["asymptotics", "--window", "60:30"])
    assert exc.value.code == 2


def test_bench_divergence_grows_with_bits(capsys):
    code, out, _ = run(capsys, "bench", "--n", "45", "--sweep", "128,256")
    summary = json.loads(out)["tables"]["summary"]
    assert code == 0
    assert summary[0]["diverged_at"] < summary[1]["diverged_at"]
