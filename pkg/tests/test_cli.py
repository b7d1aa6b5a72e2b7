import json
import subprocess
import sys

import pytest

from hslab import cli
from hslab.params import make_params, hardy_sobolev_constant


def run(args, tmp_path, capsys):
    code = cli.main([*args, "--out", str(tmp_path)])
    out, err = capsys.readouterr()
    return code, out, err


def test_no_command_is_usage_error(capsys):
    assert cli.main([]) == 1


def test_bad_option_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["constants", "--N", "four"])
    assert exc.value.code == 1


@pytest.mark.parametrize(
    "args",
    [
        ["constants", "--gamma", "1.5"],
        ["constants", "--N", "2"],
        ["spectrum", "--n", "100"],
        ["spectrum", "--kmax", "2"],
        ["hidden-level", "--z-list=-1,2"],
        ["constants", "--formats", "json,pdf"],
        ["quotient", "no/such/file.csv"],
    ],
)
def test_config_errors(args, tmp_path, capsys):
    code, _, err = run(args, tmp_path, capsys)
    assert code == 2 and "configuration error" in err
    assert not list(tmp_path.iterdir())


def test_constants_json(tmp_path, capsys):
    code, out, _ = run(["constants", "--N", "4", "--gamma", "0.75"], tmp_path, capsys)
    assert code == 0
    d = json.loads((tmp_path / "constants.json").read_text())
    assert d == json.loads(out)
    assert d["config"]["gamma"] == 0.75
    c = d["constants"]
    assert c["S_gamma"] == pytest.approx(hardy_sobolev_constant(make_params(4, 0.75)), rel=1e-15)
    assert c["Lambda"] == 0.5
    assert d["thresholds"]["gamma0"] is None


def test_gamma0_command(tmp_path, capsys):
    code, out, _ = run(["gamma0", "--N", "3"], tmp_path, capsys)
    assert code == 0
    assert json.loads(out)["thresholds"]["gamma0"] == pytest.approx(0.1798585, abs=1e-7)
    code, _, _ = run(["gamma0", "--N", "4"], tmp_path, capsys)
    assert code == 2


def test_spectrum_sweep(tmp_path, capsys):
    code, out, _ = run(["spectrum", "--N", "4", "--gamma-grid", "3"], tmp_path, capsys)
    assert code == 0
    lines = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "gamma,gap_numeric,gap_formula,mu3_sector" and len(lines) == 4


def test_determinism_and_svg(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["two-peak", "--formats", "json,csv,svg", "--out", str(d)]) == 0
    capsys.readouterr()
    for name in ("two_peak.csv", "two_peak.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    ja, jb = (json.loads((d / "two_peak.json").read_text()) for d in (a, b))
    ja["config"].pop("out"), jb["config"].pop("out")
    assert ja == jb


def test_env_output_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("HSLAB_OUT", str(tmp_path / "env"))
    assert cli.main(["constants"]) == 0
    assert (tmp_path / "env" / "constants.json").is_file()
    capsys.readouterr()


def test_radial_min_field_roundtrip(tmp_path, capsys):
    code, out, _ = run(["radial-min", "--max-iter", "500"], tmp_path, capsys)
    assert code == 0
    est = json.loads(out)["c_rad_estimate"]
    code, out, _ = run(["quotient", str(tmp_path / "radial_min_field.csv")], tmp_path, capsys)
    assert code == 0
    assert json.loads(out)["report"]["quotient"] == pytest.approx(est, rel=1e-12)


def test_degenerate_field_exit_code(tmp_path, capsys):
    from hslab.cylinder import default_grid, dump_field, hs_bubble

    p = make_params(4, 0.75)
    path = tmp_path / "bubble.csv"
    path.write_text(dump_field(hs_bubble(p, default_grid(p))))
    code, _, err = run(["quotient", str(path)], tmp_path / "o", capsys)
    assert code == 3 and "degenerate" in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "hslab", "constants", "--out", str(tmp_path)], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["constants"]["N"] == 4
