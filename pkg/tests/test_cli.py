import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from qmom.cli import main
from qmom.config import RunConfig, load_config, parse_table
from qmom.errors import ValidationError

DATA = Path(__file__).parent / "data"
SYS_6363 = ["--stats", "fermion", "--N1", "6", "--m1", "3", "--N2", "6", "--m2", "3"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_moments_json(capsys):
    code, out, _ = run(capsys, "moments", *SYS_6363, "--k", "2")
    assert code == 0
    rep = json.loads(out)
    assert rep["mu2"] == 204.0
    assert rep["q"] == pytest.approx(1523 / 4624, rel=1e-15)
    assert rep["y_policy"] == "asymptotic_u"


def test_gue_reduction_from_cli(capsys):
    code, out, _ = run(capsys, "moments", "--stats", "fermion", "--N1", "6", "--m1", "3",
                       "--N2", "6", "--m2", "0", "--k", "3")
    assert code == 0
    assert json.loads(out)["q"] == pytest.approx(0.0025, rel=1e-15)


@pytest.mark.parametrize("argv, code", [
    (["moments", *SYS_6363, "--k", "9"], 3),
    (["moments", *SYS_6363], 2),
    (["moments", "--stats", "fermion", "--N1", "4", "--m1", "5", "--N2", "4", "--m2", "1", "--k", "1"], 2),
    (["moments", "--stats", "boson", "--N1", "4", "--m1", "3", "--N2", "4", "--m2", "3", "--k", "1",
      "--mode", "asymptotic"], 2),
    (["qnormal-table", "--q", "1.5"], 2),
    (["simulate", *SYS_6363, "--k", "1", "--members", "4"], 2),
    (["simulate", "--stats", "fermion", "--N1", "20", "--m1", "10", "--N2", "4", "--m2", "1", "--k", "1",
      "--members", "2", "--seed", "0"], 4),
])
def test_exit_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.startswith("qmom:")


def test_dim_cap_flag(capsys):
    code, _, err = run(capsys, "simulate", *SYS_6363, "--k", "1", "--members", "2", "--seed", "0",
                       "--dim-cap", "100")
    assert code == 4 and "400" in err


@pytest.mark.parametrize("stats, name", [("fermion", "sweep_fermion_6363.csv"), ("boson", "sweep_boson_4343.csv")])
def test_sweep_golden(tmp_path, stats, name):
    n, m = ("6", "3") if stats == "fermion" else ("4", "3")
    out = tmp_path / "s.csv"
    assert main(["sweep", "--stats", stats, "--N1", n, "--m1", m, "--N2", n, "--m2", m, "--csv", str(out)]) == 0
    assert out.read_text() == (DATA / name).read_text()


def test_golden_rows_agree_with_exact_q():
    rows = list(csv.DictReader((DATA / "sweep_fermion_6363.csv").open()))
    assert float(rows[1]["q"]) == 1523 / 4624
    assert float(rows[1]["mu4"]) == pytest.approx(2 + 1523 / 4624, rel=1e-15)


def test_sweep_grid_and_rscheme(capsys):
    code, out, _ = run(capsys, "sweep", "--grid", "small-m1", "--scheme", "rscheme", "--R", "0.2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 12 and {r["R"] for r in rows} == {"0.2"}


def test_qnormal_table(capsys):
    code, out, _ = run(capsys, "qnormal-table", "--q", "0", "--x-min", "-2", "--x-max", "2", "--points", "5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [float(r["x"]) for r in rows] == [-2.0, -1.0, 0.0, 1.0, 2.0]
    assert float(rows[2]["pdf"]) == pytest.approx(0.318310, abs=1e-6)
    assert float(rows[3]["He2"]) == 0.0
    code, out, _ = run(capsys, "qnormal-table", "--q", "1", "--x-min", "0", "--x-max", "0", "--points", "1")
    assert float(next(csv.DictReader(io.StringIO(out)))["pdf"]) == pytest.approx(0.398942, abs=1e-6)


def test_simulate_outputs(tmp_path):
    js, hist = tmp_path / "a.json", tmp_path / "h.csv"
    argv = ["simulate", "--stats", "fermion", "--N1", "5", "--m1", "2", "--N2", "4", "--m2", "2", "--k", "2",
            "--members", "6", "--seed", "11", "--json", str(js), "--histogram", str(hist)]
    assert main(argv) == 0
    masses = [float(r["mass"]) for r in csv.DictReader(hist.open())]
    assert sum(masses) == pytest.approx(1.0)
    assert json.loads(js.read_text())["members"] == 6


def test_compare_runs(capsys):
    code, out, _ = run(capsys, "compare", *SYS_6363, "--k", "3", "--members", "4", "--seed", "1")
    assert code == 0
    assert json.loads(out)["mu2"]["theory"] == 760.0


def test_config_file_and_override(tmp_path, capsys):
    ini = tmp_path / "run.ini"
    ini.write_text("[system]\nstats = fermion\nN1 = 6\nm1 = 3\nN2 = 6\nm2 = 3\n\n[interaction]\nk = 1\n")
    code, out, _ = run(capsys, "moments", "--config", str(ini), "--k", "2")
    assert code == 0 and json.loads(out)["mu2"] == 204.0


def test_config_round_trip():
    text = ("[system]\nstats = boson\nN1 = 4\nm1 = 3\nN2 = 4\nm2 = 2\n\n[interaction]\nk = 2\n"
            "scheme = table\ntable = 2,0=1; 1,1=1/2; 0,2=3\ny_policy = drop\n\n[simulate]\nmembers = 50\nseed = 9\n")
    cfg = RunConfig.from_ini(text)
    again = RunConfig.from_ini(cfg.to_ini())
    assert again == cfg
    assert again.to_ini() == cfg.to_ini()
    assert again.interaction().variances()[(1, 1)] == pytest.approx(0.5)


@pytest.mark.parametrize("text", ["[bogus]\nx = 1\n", "[system]\nN3 = 4\n", "[system]\nN1 = four\n",
                                  "[interaction]\nmode = exact\n", "[simulate]\nmembers = 0\n"])
def test_config_rejects_bad_input(text):
    with pytest.raises(ValidationError):
        RunConfig.from_ini(text)


def test_missing_config_file():
    with pytest.raises(ValidationError):
        load_config("/nonexistent/qmom.ini")


def test_parse_table():
    assert parse_table("2,0=1; 1,1=0.5") == {(2, 0): 1, (1, 1): 0.5}
    with pytest.raises(ValidationError):
        parse_table("2,0")


def test_simulate_json_identical_across_runs_and_threads(tmp_path):
    def once(workers):
        path = tmp_path / f"w{workers}.json"
        cmd = [sys.executable, "-m", "qmom", "simulate", "--stats", "boson", "--N1", "3", "--m1", "2",
               "--N2", "3", "--m2", "2", "--k", "2", "--members", "8", "--seed", "5",
               "--workers", str(workers), "--json", str(path)]
        subprocess.run(cmd, check=True)
        return path.read_bytes()

    assert once(1) == once(1) == once(4)
