import json
from pathlib import Path

import pytest

from hypermaps.cli import CliConfig, build_parser, main

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_777(capsys):
    code, out, _ = run(capsys, "construct", "--type", "7,7,7", "--prime", "29")
    assert code == 0
    rec = json.loads(out)
    assert rec["type"] == [7, 7, 7] and rec["p"] == 29
    assert all(rec["verified"].values())
    assert rec["verified"]["order_R"] and rec["verified"]["RST_identity"]


def test_construct_seven_two_three_forced_traces(capsys):
    code, out, _ = run(capsys, "construct", "--type", "7,2,3", "--prime", "29")
    assert code == 0
    assert json.loads(out)["traces"][1:] == [0, 1]


def test_parabolic_type_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["construct", "--type", "2,3,6", "--prime", "7"])
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "argv,code",
    [
        (["construct", "--type", "7,7,7", "--prime", "31"], 3),
        (["construct", "--type", "7,7,7", "--prime", "29", "--family", "odd", "--indices", "1,1,2"], 4),
        (["verify", "--type", "3,3,4", "--prime", "1009"], 5),
        (["construct", "--type", "7,7,7", "--prime", "30"], 1),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_verify_reports_itemised_checks(capsys):
    code, out, _ = run(capsys, "verify", "--type", "2,4,5", "--prime", "41", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["rotation_order"] == 34440
    assert rep["V"] - rep["E"] + rep["F"] == rep["chi"]
    assert all(rep["verified"].values())


def test_verify_text_mode(capsys):
    code, out, _ = run(capsys, "verify", "--type", "7,7,7", "--prime", "29")
    assert code == 0
    assert "orientability_agrees" in out and "FAIL" not in out


def test_sort_flag():
    args = build_parser().parse_args(["construct", "--type", "7,2,3", "--prime", "29", "--sort"])
    assert tuple(CliConfig.from_args(args).type) == (2, 3, 7)
    args = build_parser().parse_args(["construct", "--type", "7,2,3", "--prime", "29"])
    assert tuple(CliConfig.from_args(args).type) == (7, 2, 3)


def test_scan_golden(capsys, tmp_path):
    out = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan", "--type", "7,7,7", "--max-prime", "2000", "--out", str(out), "--jobs", "1")
    assert code == 0
    assert out.read_text() == (DATA / "scan_777_2000.csv").read_text()


def test_scan_stdout_deterministic_across_jobs(capsys):
    a = run(capsys, "scan", "--type", "7,2,3", "--max-prime", "20000", "--format", "json", "--jobs", "1")[1]
    b = run(capsys, "scan", "--type", "7,2,3", "--max-prime", "20000", "--format", "json", "--jobs", "2")[1]
    assert a == b
    assert json.loads(a)


def test_density_json(capsys):
    code, out, _ = run(capsys, "density", "--type", "7,2,3", "--max-prime", "100000", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["h"] == 96 and rep["n_S"] > 0
    assert abs(rep["p_1_or_13_mod_28"]["empirical"] - 1 / 6) < 0.02


def test_hall723(capsys):
    code, out, _ = run(capsys, "hall723", "--max-prime", "5000", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["failures"] == [] and rep["primes_tested"] > 0
