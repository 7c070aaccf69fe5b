import json

import numpy as np
import pytest

from tomofit.cli import InputError, main, parse_counts_csv, parse_stokes_json
from tomofit.stokes import ALPHABET, UnphysicalStateError


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _run(args):
    return main([str(a) for a in args])


def test_ingest_uniform_csv():
    text = "setting,count,shots\n" + "".join(f"{k},500,1000\n" for k in ALPHABET)
    m = parse_counts_csv(text)
    assert m.n_qubits == 1 and len(m) == 6
    from tomofit.stokes import stokes_from_counts

    assert stokes_from_counts(m).as_array().tolist() == [0, 0, 0]


def test_ingest_stokes_json():
    s = parse_stokes_json('{"s1":0,"s2":0,"s3":1}')
    assert s.as_array().tolist() == [0, 0, 1] and not s.clamped
    s = parse_stokes_json('{"s1":0.8,"s2":0.8,"s3":0.0}')
    assert s.clamped
    assert s.norm == pytest.approx(1.0)
    assert np.hypot(0.8, 0.8) == pytest.approx(1.131, abs=5e-4)


@pytest.mark.parametrize(
    "text, match",
    [
        ("", "line 1"),
        ("setting,counts,shots\n", "line 1"),
        ("setting,count,shots\nH,5,10\nV,x,10\n", "line 3"),
        ("setting,count,shots\nH,5,10\nV,11,10\n", "line 3.*exceeds"),
        ("setting,count,shots\nH,5,10\nV,5,10\n", "incomplete"),
        ("setting,count,shots\nH,5,10\nQ,5,10\n", "line 3.*unknown"),
        ("setting,count,shots\nH,5\n", "line 2"),
    ],
)
def test_csv_errors(text, match):
    with pytest.raises(InputError, match=match):
        parse_counts_csv(text)


def test_json_errors():
    with pytest.raises(InputError, match="line 1"):
        parse_stokes_json("{bad")
    with pytest.raises(InputError):
        parse_stokes_json('{"s1": 0}')
    with pytest.raises(UnphysicalStateError):
        parse_stokes_json('{"s1": 1.5, "s2": 0, "s3": 0}')


def test_seed_mode(tmp_path):
    inp = _write(tmp_path, "s.json", '{"s1": 0, "s2": 0, "s3": 0}')
    out = tmp_path / "r.json"
    assert _run(["--mode", "seed", "--input", inp, "--format", "stokes-json", "--output", out]) == 0
    rep = json.loads(out.read_text())
    assert rep["schema_version"] == 1
    seeds = {s["form"]: s for s in rep["seeds"]}
    assert list(seeds) == ["A", "B", "C", "D"]
    assert seeds["B"]["t"] == [1, 1, 0, 0]
    assert seeds["A"]["t"] == [1, 1, 0, 0]
    # C and D are singular at s1 = s2 = 0
    fallbacks = [e for e in rep["events"] if e["kind"] == "fallback"]
    assert sorted(e["form"] for e in fallbacks) == ["C", "D"]


def test_simulate_pure_h(tmp_path):
    out = tmp_path / "counts.csv"
    code = _run(["--mode", "simulate", "--true-stokes", "0,0,1", "--shots", 1000, "--rng-seed", 7, "--output", out])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "setting,count,shots"
    rows = dict((r.split(",")[0], r.split(",")[1:]) for r in lines[1:])
    assert rows["H"] == ["1000", "1000"]
    assert rows["V"] == ["0", "1000"]


def test_simulate_then_check(tmp_path):
    csv_path = tmp_path / "counts.csv"
    assert _run(["--mode", "simulate", "--true-stokes", "0.3,0.4,0.5", "--shots", 10**5,
                 "--rng-seed", 3, "--output", csv_path]) == 0
    out = tmp_path / "check.json"
    assert _run(["--mode", "check", "--input", csv_path, "--objective", "gaussian_ls", "--output", out]) == 0
    rep = json.loads(out.read_text())
    assert rep["consistent"] is True
    assert rep["max_trace_distance"] <= 0.01
    assert len(rep["fits"]) == 4
    d = np.array(rep["pairwise_trace_distance"])
    np.testing.assert_array_equal(d, d.T)


def test_simulate_then_fit_recovers_state(tmp_path):
    csv_path = tmp_path / "counts.csv"
    assert _run(["--mode", "simulate", "--true-stokes=-0.2,0.1,-0.7", "--shots", 10**4, "--rng-seed", 11,
                 "--output", csv_path]) == 0
    out = tmp_path / "fit.json"
    assert _run(["--mode", "fit", "--input", csv_path, "--output", out]) == 0
    rep = json.loads(out.read_text())
    (fit,) = rep["fits"]
    assert fit["form"] == "A"
    rho = np.array([[complex(*z) for z in row] for row in fit["rho_hat"]])
    from tomofit.linalg import fidelity
    from tomofit.stokes import rho_from_stokes

    assert fidelity(rho, rho_from_stokes((-0.2, 0.1, -0.7))) >= 0.99
    assert set(rep["stokes_estimate"]) == {"s1", "s2", "s3", "clamped"}
    assert len(rep["input"]["sha256"]) == 64


def test_fit_single_requested_form(tmp_path):
    csv_path = tmp_path / "counts.csv"
    _run(["--mode", "simulate", "--true-stokes", "0.5,0,0", "--shots", 1000, "--output", csv_path])
    out = tmp_path / "fit.json"
    assert _run(["--mode", "fit", "--input", csv_path, "--forms", "C", "--output", out]) == 0
    assert json.loads(out.read_text())["fits"][0]["form"] == "C"


def test_reports_are_deterministic(tmp_path):
    csv_path = tmp_path / "counts.csv"
    _run(["--mode", "simulate", "--true-stokes", "0.1,0.2,0.3", "--shots", 5000, "--output", csv_path])
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert _run(["--mode", "check", "--input", csv_path, "--output", out]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_clamp_event_reported_once(tmp_path):
    rows = {"H": 500, "V": 500, "D": 1000, "A": 0, "R": 1000, "L": 0}
    text = "setting,count,shots\n" + "".join(f"{k},{v},1000\n" for k, v in rows.items())
    inp = _write(tmp_path, "c.csv", text)
    out = tmp_path / "fit.json"
    assert _run(["--mode", "fit", "--input", inp, "--output", out]) == 0
    rep = json.loads(out.read_text())
    assert [e["kind"] for e in rep["events"]].count("clamped") == 1
    assert rep["stokes_estimate"]["clamped"] is True


def test_two_qubit_fit_and_check(tmp_path):
    from tomofit.stokes import sample_counts
    from tomofit.cli import write_counts_csv

    rho = np.diag([0.7, 0.1, 0.1, 0.1]).astype(complex)
    path = tmp_path / "two.csv"
    with open(path, "w") as fh:
        write_counts_csv(sample_counts(rho, 2000, seed=1), fh)
    out = tmp_path / "fit.json"
    assert _run(["--mode", "fit", "--input", path, "--output", out]) == 0
    rep = json.loads(out.read_text())
    assert rep["n_qubits"] == 2 and rep["fits"][0]["form"] == "B_multi"
    assert _run(["--mode", "check", "--input", path, "--output", out]) == 0
    assert [f["form"] for f in json.loads(out.read_text())["fits"]] == ["A_multi", "B_multi"]
    assert _run(["--mode", "check", "--input", path, "--forms", "C", "--output", out]) == 1


def test_exit_codes(tmp_path, caplog):
    assert _run(["--mode", "simulate", "--true-stokes", "1,1,0", "--shots", 10]) == 2
    bad = _write(tmp_path, "bad.json", '{"s1": 2, "s2": 0, "s3": 0}')
    assert _run(["--mode", "seed", "--input", bad, "--format", "stokes-json"]) == 2
    assert _run(["--mode", "fit", "--input", tmp_path / "missing.csv"]) == 1
    assert _run(["--mode", "fit"]) == 1
    broken = _write(tmp_path, "broken.csv", "setting,count,shots\nH,1,0\n")
    assert _run(["--mode", "fit", "--input", broken]) == 1
    assert "line 2" in caplog.text
    with pytest.raises(SystemExit) as info:
        _run(["--mode", "fit", "--bogus"])
    assert info.value.code == 1
    assert _run(["--mode", "seed", "--input", bad, "--format", "stokes-json", "--epsilon-fallback", -1]) == 1


def test_report_goes_to_stdout_without_output(tmp_path, capsys):
    inp = _write(tmp_path, "s.json", '{"s1": 0.5, "s2": 0, "s3": 0}')
    assert _run(["--mode", "seed", "--input", inp, "--format", "stokes-json", "--forms", "B"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert [s["form"] for s in rep["seeds"]] == ["B"]
