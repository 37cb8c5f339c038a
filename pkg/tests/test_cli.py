import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from arcticpaths.cli import RunConfig, config_from_args, main

ROOT = Path(__file__).resolve().parent.parent
SHAPES = ROOT / "shapes"


def run(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_partition_routes_agree(capsys):
    rc, out, _ = run(["partition", "--seq", "0,2,3,6,10,12,15"], capsys)
    assert rc == 0
    vals = [line.split()[1] for line in out.splitlines()[1:]]
    assert vals == ["159213600"] * 5


def test_partition_from_shape(capsys):
    rc, out, _ = run(["partition", "--shape", str(SHAPES / "pure3.shape"), "--n", "4"], capsys)
    assert rc == 0 and out.splitlines()[-1].split()[1] == "59049"
    rc, out, _ = run(["partition", "--seq", "0,1,2", "--brute"], capsys)
    assert rc == 0 and {l.split()[1] for l in out.splitlines()[1:]} == {"1"}


def test_exit_codes(capsys, tmp_path):
    assert run(["partition", "--seq", "0,2,3,6,10,12,15", "--brute"], capsys)[0] == 4
    assert run(["partition", "--seq", "1,2"], capsys)[0] == 2
    assert run(["partition"], capsys)[0] == 2
    assert run([], capsys)[0] == 2
    assert run(["bogus"], capsys)[0] == 2
    assert run(["partition", "--seq", "0,2", "--seed", "-1"], capsys)[0] == 2
    bad = tmp_path / "bad.shape"
    bad.write_text("kind: linear\np: x\n")
    rc, _, err = run(["arctic", "--shape", str(bad)], capsys)
    assert rc == 2 and "'p'" in err
    rc, _, err = run(["arctic", "--shape", str(SHAPES / "pure3.shape"), "--grid", "20",
                      "--tol", "1e-30"], capsys)
    assert rc == 3 and "tangency" in err
    rc, _, err = run(["partition", "--shape", str(SHAPES / "pure3.shape")], capsys)
    assert rc == 2 and "--n" in err


def test_onepoint_table(capsys):
    rc, out, _ = run(["onepoint", "--seq", "0,1", "--kind", "H"], capsys)
    assert rc == 0
    rows = out.splitlines()
    assert rows[0] == "ell,numerator,denominator,value"
    assert all(r.split(",")[1:3] == ["1", "1"] for r in rows[1:])
    rc, out, _ = run(["onepoint", "--seq", "0,1", "--kind", "Hhat"], capsys)
    assert rc == 2


def test_arctic_hexagon_outputs(tmp_path, capsys):
    rc, _, err = run(["arctic", "--shape", str(SHAPES / "hexagon.shape"), "--grid", "50",
                      "--out", str(tmp_path), "--svg", "--fans", "2.5,-1"], capsys)
    assert rc == 0
    rows = (tmp_path / "arctic.csv").read_text().splitlines()
    kinds = {r.split(",")[0] for r in rows[1:]}
    assert kinds == {"generic-I", "generic-II", "gap", "edge-freeze-left", "edge-freeze-right"}
    assert "conjectured=true" in err
    root = ET.fromstring((tmp_path / "arctic.svg").read_text())
    assert float(root.get("width")) == 800


def test_arctic_triangular_svg(tmp_path, capsys):
    rc, _, _ = run(["arctic", "--shape", str(SHAPES / "symmetric5.shape"), "--grid", "30",
                    "--out", str(tmp_path), "--svg", "--triangular"], capsys)
    assert rc == 0
    ET.fromstring((tmp_path / "arctic.svg").read_text())


def test_converge(capsys):
    rc, out, err = run(["converge", "--shape", str(SHAPES / "pure3.shape"), "--n", "10,20"],
                       capsys)
    assert rc == 0
    assert out.splitlines()[0] == "family,n,xi,exact_log_over_n,predicted_S0,deviation"
    assert "n=20" in err
    rc, _, _ = run(["converge", "--shape", str(SHAPES / "pure3.shape")], capsys)
    assert rc == 2


def test_sample_and_overlay(tmp_path, capsys):
    args = ["sample", "--shape", str(SHAPES / "pure3.shape"), "--n", "6", "--samples", "20",
            "--seed", "42", "--svg", "--grid", "40", "--out", str(tmp_path)]
    assert run(args, capsys)[0] == 0
    text = (tmp_path / "samples.txt").read_text()
    assert len(text.splitlines()) == 20
    ET.fromstring((tmp_path / "overlay.svg").read_text())
    assert (tmp_path / "overlay.csv").read_text().startswith("kind,X,Y\n")
    rc, _, _ = run(["sample", "--seq", "0,2", "--samples", "3", "--svg",
                    "--out", str(tmp_path)], capsys)
    assert rc == 2


def test_byte_identical_runs():
    cmds = [
        ["sample", "--seq", "0,2,5,7", "--samples", "30", "--seed", "9"],
        ["onepoint", "--seq", "0,3,4,8", "--kind", "Htilde"],
        ["arctic", "--shape", str(SHAPES / "reentrance.shape"), "--grid", "25"],
    ]
    for c in cmds:
        a = subprocess.run([sys.executable, "-m", "arcticpaths.cli", *c], capture_output=True)
        b = subprocess.run([sys.executable, "-m", "arcticpaths.cli", *c], capture_output=True)
        assert a.returncode == 0 and a.stdout and a.stdout == b.stdout


def test_console_script_selftest():
    r = subprocess.run([sys.executable, "-m", "arcticpaths.cli", "--selftest"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert len(lines) == 10 and all(l.startswith("PASS") for l in lines)


def test_run_config_round_trip():
    cfg = config_from_args(["sample", "--seq", "0,2,4", "--n", "3,5", "--seed", "7",
                            "--burn-in", "100", "--svg", "--tol", "1e-7"])
    text = cfg.canonical()
    back = RunConfig.from_canonical(text)
    assert back == cfg
    assert back.canonical() == text
    cfg2 = config_from_args(["arctic", "--shape", "x.shape", "--fans", "3.5,-0.25"])
    assert RunConfig.from_canonical(cfg2.canonical()) == cfg2
