import json
import subprocess
import sys

import pytest

from convexcut import netpbm
from convexcut.cli import main, parse_hull_sets

from conftest import annulus_image


@pytest.fixture
def annulus_pgm(tmp_path):
    p = tmp_path / "annulus.pgm"
    netpbm.write_pgm(p, annulus_image(7))
    return p


def test_parse_hull_sets():
    assert parse_hull_sets("1:1;2:1,2") == {1: {1}, 2: {1, 2}}
    with pytest.raises(ValueError):
        parse_hull_sets("12")


@pytest.mark.parametrize("argv", [
    ["mc"],
    ["mc", "--image", "x.pgm", "--labels", "2"],
    ["mcn", "--image", "x.pgm"],
    ["mcn", "--image", "x.pgm", "--labels", "2", "--hull-sets", "1:1"],
    ["mc", "--image", "x.pgm", "--directions", "all"],
    ["oracle", "--image", "x.pgm"],
    ["convex-mc", "--image", "x.pgm", "--gap", "-1"],
    ["bogus"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as err:
        main(argv)
    assert err.value.code == 2


def test_bad_image(tmp_path, capsys):
    p = tmp_path / "bad.pgm"
    p.write_bytes(b"P5\n4 4\n255\n\x00")
    assert main(["mc", "--image", str(p)]) == 2
    assert "byte offset" in capsys.readouterr().err


def test_bad_directions(annulus_pgm):
    with pytest.raises(SystemExit) as err:
        main(["convex-mc", "--image", str(annulus_pgm), "--directions", "12"])
    assert err.value.code == 2


def test_export_lp_only(tmp_path, annulus_pgm, capsys):
    lp = tmp_path / "out.lp"
    assert main(["mc", "--image", str(annulus_pgm), "--export-lp", str(lp)]) == 0
    text = lp.read_text()
    assert text.startswith("\\ written by convexcut\nMinimize\n")
    assert capsys.readouterr().out == ""


def test_convex_mcn_outputs(tmp_path, annulus_pgm, capsys):
    out, rep = tmp_path / "seg.ppm", tmp_path / "rep.json"
    code = main(["convex-mcn", "--image", str(annulus_pgm), "--labels", "2", "--hull-sets", "1:1",
                 "--beta", "0.2", "--gap", "0", "--directions", "all", "--out", str(out), "--report", str(rep)])
    assert code == 0
    data = json.loads(rep.read_text())
    assert data["status"] == "optimal" and data["wall_time"] is None
    arr, _ = netpbm.parse(out.read_bytes())
    assert arr.shape == (7, 7, 3)
    assert capsys.readouterr().out.startswith("Res,E_or_ConvexE,Iter,Time,Gap\n7x7,")


def test_iteration_cap_exit_code(annulus_pgm):
    assert main(["convex-mc", "--image", str(annulus_pgm), "--max-iterations", "1", "--beta", "0.1"]) == 3


def test_timeout_exit_code(tmp_path, annulus_pgm):
    rep = tmp_path / "r.json"
    assert main(["convex-mc", "--image", str(annulus_pgm), "--time-limit", "0", "--report", str(rep)]) == 3
    assert json.loads(rep.read_text())["status"] == "timeout"


def test_oracle_command(capsys):
    assert main(["oracle", "--max-nodes", "6", "--draws", "2"]) == 0
    assert "instances agree" in capsys.readouterr().out


def test_module_entry_point(tmp_path, annulus_pgm):
    res = subprocess.run([sys.executable, "-m", "convexcut", "mc", "--image", str(annulus_pgm)],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "Res,E_or_ConvexE,Iter,Time,Gap"
