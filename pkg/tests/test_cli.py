import csv
import io
import json
import math

import pytest

from pwlab import __version__
from pwlab.cli import SWEEP_HEADER, run


def _run(capsys, *argv):
    code = run(list(argv))
    return code, capsys.readouterr().out


def _json(capsys, *argv):
    code, out = _run(capsys, *argv)
    return code, json.loads(out)


def test_periods_envelope(capsys):
    code, env = _json(capsys, "periods", "--tol", "1e-12")
    assert code == 0 and env["status"] == "pass"
    assert env["version"] == __version__ and env["tool"] == "pwlab"
    assert env["config"]["command"] == "periods" and env["config"]["tol"] == 1e-12
    assert "rng" in env["config"] and "wall_time_s" in env
    assert env["payload"]["arg_diff"] == pytest.approx(5 * math.pi / 6, abs=1e-9)


def test_periods_radius_independent(capsys):
    _, a = _json(capsys, "periods", "--r", "0.05")
    _, b = _json(capsys, "periods", "--r", "0.1")
    assert a["payload"]["abs_diff"] == pytest.approx(b["payload"]["abs_diff"], abs=1e-9)


@pytest.mark.parametrize("argv", [
    ["periods", "--tol", "-1"],
    ["sweep", "--steps", "0"],
    ["sweep", "--cbrt-R", "-2"],
    ["sweep", "--u", "1,2,3"],
    ["pw-verify", "--steps", "100"],
    ["wkb-compare", "--r", "0.3"],
    ["transport-check", "--phi", "3.141592653589793"],
])
def test_invalid_input(capsys, argv):
    code, env = _json(capsys, *argv)
    assert code == 2 and env["status"] == "invalid-input" and "error" in env["payload"]


def test_unparseable_flag_exits_two(capsys):
    with pytest.raises(SystemExit) as info:
        run(["sweep", "--u", "a,b"])
    assert info.value.code == 2


def test_sweep_csv(capsys):
    code, out = _run(capsys, "sweep", "--cbrt-R", "15", "--steps", "1440", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == SWEEP_HEADER and len(rows) == 1441
    for row in rows[1:]:
        lx, ly, lz = float(row[1]), float(row[3]), float(row[5])
        if row[7].startswith("S"):
            assert lz >= max(lx, ly)


def test_sweep_never_overflows(capsys):
    code, out = _run(capsys, "sweep", "--cbrt-R", "500", "--steps", "36", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))[1:]
    assert code == 0 and all(math.isfinite(float(r[5])) and float(r[5]) > 709 for r in rows)


def test_deterministic_output(capsys, monkeypatch):
    argv = ["sweep", "--cbrt-R", "7", "--steps", "90", "--u", "1,-1,0,0.5,0.5,-1,0,0,0,2,-1,-1"]
    _, a = _run(capsys, *argv)
    monkeypatch.setenv("PWLAB_THREADS", "3")
    _, b = _run(capsys, *argv)
    assert a == b
    _, c = _run(capsys, "betti-sample", "--count", "5", "--seed", "9")
    _, d = _run(capsys, "betti-sample", "--count", "5", "--seed", "9")
    assert c == d


def test_timing_flag(capsys):
    _, env = _json(capsys, "periods")
    assert env["wall_time_s"] is None
    _, env = _json(capsys, "periods", "--timing")
    assert env["wall_time_s"] >= 0


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out = _run(capsys, "sectors-table", "--out", str(target))
    env = json.loads(target.read_text())
    assert out == "" and code == 0 and env["status"] == "pass"
    assert len(env["payload"]["rows"]) == 12


def test_pw_verify(capsys):
    code, env = _json(capsys, "pw-verify", "--cbrt-R", "15", "--steps", "1440")
    assert code == 0 and env["payload"]["all_valid"] and abs(env["payload"]["winding"]) == 1


def test_pw_verify_fails_at_small_radius(capsys):
    code, env = _json(capsys, "pw-verify", "--cbrt-R", "0.5", "--steps", "720")
    assert code == 1 and env["status"] == "fail" and env["payload"]["winding"] is None


def test_betti_sample(capsys):
    code, env = _json(capsys, "betti-sample", "--count", "100", "--seed", "42")
    assert code == 0 and env["payload"]["max_lawton_rel_residual"] <= 1e-8


def test_divisor_check(capsys):
    code, env = _json(capsys, "divisor-check", "--random", "20", "--seed", "7")
    assert code == 0 and env["payload"]["single_node_count"] == 20


def test_transport_check(capsys):
    code, env = _json(capsys, "transport-check", "--phi", "1.5707963267948966", "--grid", "2,3,4,5",
                      "--tol", "1e-8")
    assert code == 0 and len(env["payload"]["rows"]) == 4


def test_wkb_compare_reports_scaled_pairs(capsys):
    code, env = _json(capsys, "wkb-compare", "--cbrt-R", "30", "--phi", "1.0")
    z = env["payload"]["matrix"]["Z"]
    assert set(z) == {"mantissa", "exponent"} and z["exponent"] > 709
    assert env["payload"]["checks"]["lawton_matrix_route"]
    # the closed-form Z is the reversed commutator trace, so the routes disagree
    assert code == 1 and env["status"] == "fail"


def test_csv_key_value_layout(capsys):
    code, out = _run(capsys, "periods", "--format", "csv")
    rows = dict(csv.reader(io.StringIO(out)))
    assert rows["status"] == "pass" and float(rows["abs_diff"]) == pytest.approx(18.3594485, rel=1e-8)
