import json
import subprocess
import sys

import pytest

from affusion.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def doc(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK
    return json.loads(out)


def test_pplus_e8_level_two(capsys):
    d = doc(capsys, "pplus", "E8k2")
    assert d["schema_version"] == 1
    ws = d["payload"]["weights"]
    assert len(ws) == 3
    assert sorted(w["kind"] for w in ws) == ["current", "current", "fixed-point"]


def test_pplus_b3_level_two_partition(capsys):
    ws = doc(capsys, "pplus", "B3k2")["payload"]["weights"]
    kinds = [w["kind"] for w in ws]
    assert (kinds.count("current"), kinds.count("fixed-point"), kinds.count("generic")) == (2, 3, 2)


def test_smatrix_csv(capsys):
    code, out, _ = run(capsys, "smatrix", "A1k1", "--format", "csv")
    assert code == EXIT_OK
    rows = out.strip().splitlines()
    assert rows[0] == "row,col,real,imag"
    assert len(rows) == 5
    assert all(abs(abs(float(r.split(",")[2])) - 2 ** -0.5) < 1e-14 for r in rows[1:])


def test_smatrix_json_residuals(capsys):
    d = doc(capsys, "smatrix", "G2k1")
    assert len(d["payload"]["real"]) == 2
    assert all(v < 1e-9 for k, v in d["payload"]["residuals"].items() if k != "row0_min")


def test_fusion_product(capsys):
    d = doc(capsys, "fusion", "E6k2", "L1", "L5")
    names = {t["name"] for t in d["payload"]["product"]}
    assert names == {"0", "L6", "L1+L5"}
    assert d["payload"]["lambda"] == "1 0 0 0 0 0"


def test_fusion_whole_table_csv(capsys):
    code, out, _ = run(capsys, "fusion", "A1k2", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "lambda,mu,nu,multiplicity"


def test_qdim(capsys):
    d = doc(capsys, "qdim", "family=A rank=1 level=2", "L1")
    assert abs(d["payload"]["qdims"][0]["qdim"] - 2 ** 0.5) < 1e-12


def test_autos_compare(capsys):
    d = doc(capsys, "autos", "F4k4", "--mode", "compare")
    assert d["payload"]["equal"] is True
    assert d["payload"]["order"] == 4


def test_autos_a2_level_two(capsys):
    code, out, _ = run(capsys, "autos", "A2k2", "--mode", "compare")
    assert code == EXIT_OK
    assert json.loads(out)["payload"]["order"] == 2


def test_iso(capsys):
    d = doc(capsys, "iso", "F4k2", "E8k3")
    assert d["payload"]["isomorphic"] is True
    assert len(d["payload"]["bijection"]) == 5
    d = doc(capsys, "iso", "A1k2", "A2k1")
    assert d["payload"]["isomorphic"] is False


@pytest.mark.parametrize("argv", [["pplus", "X3k2"], ["pplus", "A3"], ["fusion", "A2k1", "L1+L2", "L1"],
                                  ["fusion", "A2k1", "L1"], ["autos", "A4k6", "--search-bound", "10"],
                                  ["nonsense"], ["smatrix", "A1k1", "--format", "xml"],
                                  ["iso", "A1k1", "A1k1", "--format", "csv"]])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_determinism(capsys):
    a = doc(capsys, "pplus", "C3k2")
    b = doc(capsys, "pplus", "C3k2")
    a.pop("elapsed_seconds"), b.pop("elapsed_seconds")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_round_trip_through_cache(capsys, tmp_path):
    from affusion import fusion
    first = doc(capsys, "fusion", "B3k3", "--cache-dir", str(tmp_path))
    fusion._TABLES.clear()
    second = doc(capsys, "fusion", "B3k3", "--cache-dir", str(tmp_path))
    assert any(tmp_path.iterdir())
    assert first["payload"] == second["payload"]


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--criteria", "7")
    d = json.loads(out)
    assert code == EXIT_OK and d["payload"]["passed"]
    assert set(d["payload"]["criteria"]) == {"7"}


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--criteria", "4")
    assert code == EXIT_FAILED
    assert not json.loads(out)["payload"]["criteria"]["4"]["passed"]


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "affusion.cli", "qdim", "G2k1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["context"]["size"] == 2
