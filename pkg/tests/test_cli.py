import os

import numpy as np
import pytest

from flatribbon import cli
from flatribbon.config import parse_config, write_csv
from flatribbon.errors import ConfigError


def run(args):
    return cli.main(args)


def write_cfg(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


HELIX_CFG = """
# rectifying strip along a helix
kind = helix
a = 1.0
b = 1.0
normal = principal
width = 0.1
mesh_nt = 40
mesh_nu = 5
"""

KNOT_CFG = """
kind = torus_knot
R = 2.0
rho = 1.0
n = 3
normal = torus_normal
grid = 800
mesh_nt = 60
mesh_nu = 5
"""


# ---------------------------------------------------------------- config


def test_parse_config_known_keys(tmp_path):
    cfg = parse_config(write_cfg(tmp_path, HELIX_CFG))
    assert cfg.kind == "helix" and cfg.a == 1.0 and cfg.width == 0.1
    assert cfg.mesh_nt == 40 and cfg.normal == "principal"


def test_parse_config_round_trip(tmp_path):
    first = parse_config(write_cfg(tmp_path, HELIX_CFG))
    # re-serializing the parsed values and parsing again gives the same config
    dump = "\n".join(
        f"{key} = {getattr(first, key)}"
        for key in ("kind", "a", "b", "normal", "width", "mesh_nt", "mesh_nu")
    )
    second = parse_config(write_cfg(tmp_path, dump, "round.cfg"))
    assert first == second


def test_parse_config_rejects_unknown_key(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(write_cfg(tmp_path, "kind = helix\nwobble = 3\n"))


def test_parse_config_rejects_bad_number(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(write_cfg(tmp_path, "a = three\n"))
    with pytest.raises(ConfigError):
        parse_config(write_cfg(tmp_path, "a = inf\n"))


def test_parse_config_reports_line_numbers(tmp_path):
    with pytest.raises(ConfigError) as info:
        parse_config(write_cfg(tmp_path, "kind = helix\nnot a pair\n"))
    assert ":2:" in str(info.value)


def test_samples_csv_curve(tmp_path):
    # a sampled helix loaded through the CSV path reproduces its length
    from flatribbon.config import RunConfig, build_curve
    from flatribbon.curves import HelixParams, make_helix

    helix = make_helix(HelixParams(1.0, 1.0))
    ts = np.linspace(0.0, helix.length, 400)
    rows = [(t, *helix.point(t)) for t in ts]
    csv_path = tmp_path / "samples.csv"
    write_csv(csv_path, ("t", "x", "y", "z"), rows)
    cfg = RunConfig(kind="samples", csv=str(csv_path))
    curve = build_curve(cfg)
    assert curve.length == pytest.approx(helix.length, abs=1e-4)


# ---------------------------------------------------------------- commands


def test_build_writes_obj_and_residuals(tmp_path):
    cfg = write_cfg(tmp_path, HELIX_CFG)
    out = tmp_path / "out"
    assert run(["build", "--config", cfg, "--out", str(out)]) == 0
    obj = out / "ribbon_q0.obj"
    residuals = out / "residuals_q0.csv"
    assert obj.exists() and residuals.exists()
    text = obj.read_text()
    assert text.count("\nvn ") + text.startswith("vn ") == 40
    assert len([l for l in text.splitlines() if l.startswith("v ")]) == 40 * 5
    header, *rows = residuals.read_text().splitlines()
    assert header == "t,ruling_in_plane,tangent_plane,gauss_estimate"
    worst = max(float(r.split(",")[1]) for r in rows)
    assert worst < 1e-8


def test_build_rejects_excessive_width(tmp_path, capsys):
    cfg = write_cfg(tmp_path, KNOT_CFG + "width = 50\n")
    assert run(["build", "--config", cfg, "--out", str(tmp_path / "o")]) == 3
    assert "bound" in capsys.readouterr().err


def test_unknown_config_key_exit_code(tmp_path):
    cfg = write_cfg(tmp_path, "kind = helix\nbogus = 1\n")
    assert run(["build", "--config", cfg]) == 2


def test_missing_config_exit_code(tmp_path):
    assert run(["solve", "--config", str(tmp_path / "nope.cfg")]) == 2


def test_solve_writes_theta_table(tmp_path):
    cfg = write_cfg(tmp_path, HELIX_CFG + "grid = 400\n")
    out = tmp_path / "out"
    assert run(["solve", "--config", cfg, "--out", str(out), "--q", "1.5707963267948966"]) == 0
    path = out / "theta_q1.5708.csv"
    header, *rows = path.read_text().splitlines()
    assert header == "t,theta,theta_prime"
    assert len(rows) == 401
    t0, theta0, _ = (float(x) for x in rows[0].split(","))
    assert t0 == 0.0 and theta0 == pytest.approx(np.pi / 2, abs=1e-12)


def test_energy_reports_three_methods(tmp_path):
    cfg = write_cfg(tmp_path, HELIX_CFG + "grid = 800\n")
    out = tmp_path / "out"
    assert run(["energy", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "energy.csv").read_text().splitlines()
    assert lines[0] == "label,q,w,value,method,err_estimate"
    labels = [l.split(",")[0] for l in lines[1:]]
    assert labels == ["closed", "quadrature", "limit"]
    values = [float(l.split(",")[3]) for l in lines[1:]]
    want = 0.1 * 2 * np.pi * np.sqrt(2.0) / 2.0
    for v in values:
        assert v == pytest.approx(want, rel=1e-6)


def test_sweep_tables(tmp_path):
    cfg = write_cfg(tmp_path, "kind = helix\nr = 1,2\n")
    out = tmp_path / "out"
    assert run(["sweep", "--config", cfg, "--out", str(out)]) == 0
    for name in ("ratioA_r1.csv", "ratioA_r2.csv", "ratioB_r1.csv", "ratioB_r2.csv"):
        assert (out / name).exists()
    a_rows = (out / "ratioA_r1.csv").read_text().splitlines()[1:]
    assert len(a_rows) == 512
    q0, v0 = (float(x) for x in a_rows[0].split(","))
    assert (q0, v0) == (0.0, 1.0)
    b_rows = (out / "ratioB_r1.csv").read_text().splitlines()[1:]
    qs = np.array([float(r.split(",")[0]) for r in b_rows])
    vals = np.array([float(r.split(",")[1]) for r in b_rows])
    i = int(np.argmin(np.abs(qs - np.pi)))
    # the grid contains q = pi exactly (512 points over [0, 2 pi))
    assert qs[i] == pytest.approx(np.pi, abs=1e-12)
    assert vals[i] == pytest.approx(2.0 - np.pi / 2.0, abs=1e-10)


def test_sweep_flattens_as_r_grows(tmp_path):
    cfg = write_cfg(tmp_path, "kind = helix\nr = 1,2,3,4\n")
    out = tmp_path / "out"
    assert run(["sweep", "--config", cfg, "--out", str(out)]) == 0
    devs = {}
    for r in (1, 4):
        rows = (out / f"ratioA_r{r}.csv").read_text().splitlines()[1:]
        vals = np.array([float(row.split(",")[1]) for row in rows])
        devs[r] = float(np.max(np.abs(vals - 1.0)))
    assert devs[4] < devs[1]


def test_sweep_is_deterministic(tmp_path):
    cfg = write_cfg(tmp_path, "kind = helix\nr = 1\n")
    outputs = []
    for name in ("one", "two"):
        out = tmp_path / name
        assert run(["sweep", "--config", cfg, "--out", str(out)]) == 0
        outputs.append((out / "ratioA_r1.csv").read_bytes())
    assert outputs[0] == outputs[1]
    assert b"\r" not in outputs[0]


def test_validate_passes_and_reports_each_check(capsys):
    assert run(["validate"]) == 0
    out = capsys.readouterr().out
    lines = [l for l in out.splitlines() if " measured=" in l]
    assert all(l.endswith("pass") for l in lines)
    summary = out.splitlines()[-1]
    assert summary == f"{len(lines)}/{len(lines)} checks passed"


def test_validate_detects_injected_fault(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "fault = perturb_ruling\n")
    assert run(["validate", "--config", cfg]) == 1
    out = capsys.readouterr().out
    assert any("FAIL" in l for l in out.splitlines() if "flatness" in l)
