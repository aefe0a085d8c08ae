import csv
import io
import json
import subprocess
import sys

import pytest

from roosperm.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def toy(tmp_path, capsys):
    p = tmp_path / "m.json"
    assert run(capsys, "gen", "--targets", "4", "--measurements", "4", "--seed", "7", "--output", str(p))[0] == 0
    return p


@pytest.fixture
def five(tmp_path, capsys):
    p = tmp_path / "m5.json"
    assert run(capsys, "gen", "--targets", "5", "--measurements", "3", "--seed", "1", "-o", str(p))[0] == 0
    return p


def test_gen_records_rng(toy):
    obj = json.loads(toy.read_text())
    assert obj["targets"] == 4 and obj["cols"] == 12
    assert obj["rng"]["algorithm"] == "numpy.random.PCG64" and obj["rng"]["seed"] == 7


def test_permanent_deterministic(toy, capsys):
    a = run(capsys, "permanent", str(toy))
    b = run(capsys, "permanent", str(toy))
    assert a == b and a[0] == 0
    assert json.loads(a[1])["value"] == pytest.approx(50.66143782352675, rel=1e-10)


@pytest.mark.parametrize("method", ["ryser", "bruteforce", "auto"])
def test_permanent_methods(toy, capsys, method):
    code, out, _ = run(capsys, "permanent", str(toy), "--method", method)
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(50.66143782352675, rel=1e-10)


def test_approx_interval(five, capsys):
    code, out, _ = run(capsys, "approx", str(five), "--order", "2", "--diagnostics")
    obj = json.loads(out)
    assert code == 0 and obj["bound_available"]
    assert obj["lower"] <= obj["estimate"] <= obj["upper"]
    assert obj["diagnostics"]["kappa4"] is not None


def test_approx_small_n_has_no_upper(toy, capsys):
    obj = json.loads(run(capsys, "approx", str(toy), "--order", "1")[1])
    assert obj["upper"] is None and obj["half_width"] is None


def test_kbest(toy, capsys):
    obj = json.loads(run(capsys, "kbest", str(toy), "--k", "5")[1])
    assert len(obj["assignments"]) == 5
    assert all(len(a["assignment"]) == 4 for a in obj["assignments"])


def test_kbest_plain_wide_csv(tmp_path, capsys):
    p = tmp_path / "w.csv"
    p.write_text("0.7,0.3\n0.4,0.6\n")
    obj = json.loads(run(capsys, "kbest", str(p), "--k", "2")[1])
    assert [a["assignment"] for a in obj["assignments"]] == [[0, 1], [1, 0]]
    assert obj["cumulative_weights"] == pytest.approx([0.42, 0.54])


def test_truncation_csv(five, capsys):
    code, out, _ = run(capsys, "truncation", str(five), "--k-max", "20", "--order", "2", "--exact", "--csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["K", "cumulative_weight", "mass_lower", "mass_upper", "mass_exact"]
    assert len(rows) == 21
    for r in rows[1:]:
        assert float(r[2]) <= float(r[4]) <= float(r[3])


def test_truncation_json_no_exact(five, capsys):
    obj = json.loads(run(capsys, "truncation", str(five), "--k-max", "3", "--no-exact")[1])
    assert obj["permanent_exact"] is None


def test_bench_counts(capsys):
    code, out, _ = run(capsys, "bench", "--targets", "5", "--measurements", "8..10", "--trials", "3", "--seed", "1")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["method", "rows", "cols", "trial", "wall_time_s", "value"]
    assert len(rows) - 1 == 3 * 3 * 3
    assert {r[0] for r in rows[1:]} == {"ryser", "roos1", "roos2"}


def test_bench_skips_infeasible_bruteforce(capsys):
    code, out, err = run(capsys, "bench", "--targets", "8", "--measurements", "16", "--trials", "1",
                         "--methods", "bruteforce,roos1")
    assert code == 0 and "skipped bruteforce" in err
    assert [r[0] for r in csv.reader(io.StringIO(out))][1:] == ["roos1"]


def test_infeasible_exit_code(tmp_path, capsys):
    p = tmp_path / "big.json"
    run(capsys, "gen", "--targets", "12", "--measurements", "10", "--seed", "0", "-o", str(p))
    code, _, err = run(capsys, "permanent", str(p), "--method", "bruteforce")
    assert code == 1 and "infeasible" in err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["approx"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["bench", "--methods", "magic"])
    assert exc.value.code == 2


def test_bad_file_exit_1(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("1,2\n3\n")
    code, _, err = run(capsys, "permanent", str(p))
    assert code == 1 and "line 2" in err


def _strip_times(text):
    return [r[:4] + r[5:] for r in csv.reader(io.StringIO(text))]


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--targets", "3", "--measurements", "5", "--seed", "9"],
        ["gen", "--targets", "3", "--measurements", "5", "--seed", "9", "--format", "csv"],
        ["permanent", "{m}"],
        ["approx", "{m}", "--order", "2", "--diagnostics"],
        ["kbest", "{m}", "--k", "7"],
        ["truncation", "{m}", "--k-max", "12", "--csv"],
        ["truncation", "{m}", "--k-max", "12"],
    ],
)
def test_byte_identical_payloads(five, capsys, argv):
    argv = [a.format(m=five) for a in argv]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_bench_deterministic_except_time(capsys):
    argv = ["bench", "--targets", "5", "--measurements", "6", "--trials", "2", "--seed", "4"]
    assert _strip_times(run(capsys, *argv)[1]) == _strip_times(run(capsys, *argv)[1])


def test_threads_do_not_change_answer(toy, capsys):
    a = json.loads(run(capsys, "permanent", str(toy), "--method", "ryser")[1])["value"]
    b = json.loads(run(capsys, "permanent", str(toy), "--method", "ryser", "--threads", "4")[1])["value"]
    assert b == pytest.approx(a, rel=1e-12)


def test_backend_flag(toy, capsys):
    code, out, _ = run(capsys, "--backend", "python", "permanent", str(toy))
    assert code == 0
    from roosperm import _backend

    _backend.set_backend(_backend.available()[0] if "compiled" not in _backend.available() else "compiled")


def test_module_entry_point(toy):
    res = subprocess.run([sys.executable, "-m", "roosperm", "permanent", str(toy)], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["method"] in ("ryser", "bruteforce")
