import csv
import json
import subprocess
import sys

import pytest

from horofourier.cli import main
from horofourier.config import ConfigError, RunConfig


def test_defaults_validate():
    cfg = RunConfig().validate()
    assert cfg.params.dimension == 2
    assert cfg.strip == pytest.approx(1.0)
    assert cfg.tolerances["roundtrip"] == 1e-5


def test_config_file_parsing(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# comment line\n"
        "model = h3\n"
        "radius = 1.5   # trailing comment\n"
        "radial_count = 32\n"
        "modes = 6\n"
    )
    cfg = RunConfig.from_file(path)
    assert cfg.model == "h3" and cfg.radius == 1.5
    assert cfg.radial_count == 32 and cfg.modes == 6
    assert cfg.angular_count == 128  # untouched default


def test_config_error_paths(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("radius 1.5\n")
    with pytest.raises(ConfigError):
        RunConfig.from_file(bad)
    with pytest.raises(ConfigError):
        RunConfig().apply({"no_such_key": 1})
    with pytest.raises(ConfigError):
        RunConfig(model="h4").validate()
    with pytest.raises(ConfigError):
        RunConfig(radius=-2.0).validate()
    with pytest.raises(ConfigError):
        RunConfig(angular_count=16, modes=32).validate()
    with pytest.raises(ConfigError):
        RunConfig(lambda_step=0.0).validate()


def test_flag_overrides_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("radius = 1.5\nseed = 3\n")
    rc = main(["diagram", "--config", str(path), "--radius", "0.8",
               "--poly", "0,1", "--radial", "32", "--angular", "64",
               "--modes", "8"])
    assert rc == 0


BASE = ["--radial", "32", "--angular", "64", "--modes", "8", "--seed", "11"]


def test_cli_roundtrip_json_and_csv(tmp_path):
    out = tmp_path / "a"
    rc = main(["roundtrip", "--radius", "1.0", "--count", "2",
               "--out", str(out), "--format", "json"] + BASE)
    assert rc in (0, 1)
    rows = json.loads((out / "roundtrip.json").read_text())
    assert len(rows) == 2
    assert set(rows[0]) == {"fn_id", "R", "sup_err", "l2_err"}

    out2 = tmp_path / "b"
    rc2 = main(["roundtrip", "--radius", "1.0", "--count", "2",
                "--out", str(out2), "--format", "csv"] + BASE)
    assert rc2 == rc
    with open(out2 / "roundtrip.csv") as fh:
        table = list(csv.reader(fh))
    assert table[0] == ["fn_id", "R", "sup_err", "l2_err"]
    assert len(table) == 3


def test_cli_determinism(tmp_path):
    args = ["roundtrip", "--radius", "1.0", "--count", "2",
            "--format", "json"] + BASE
    a, b = tmp_path / "a", tmp_path / "b"
    main(args + ["--out", str(a)])
    main(args + ["--out", str(b)])
    assert (a / "roundtrip.json").read_bytes() == (b / "roundtrip.json").read_bytes()


def test_cli_solve_and_symbol_guard(tmp_path):
    out = tmp_path / "s"
    rc = main(["solve", "--poly", "0,1", "--rhs-radius", "1.0",
               "--out", str(out)] + BASE)
    assert rc == 0
    rep = json.loads((out / "solve.json").read_text())
    assert rep["residual"] < 1e-4
    assert rep["symbol_min"] == pytest.approx(0.25)
    assert main(["solve", "--poly", "0.25,1", "--rhs-radius", "1.0"] + BASE) == 3


def test_cli_config_errors():
    assert main(["roundtrip", "--model", "h4"]) == 2
    assert main(["roundtrip", "--config", "/nonexistent/run.cfg"]) == 2
    assert main(["diagram", "--poly", "0,,1"] + BASE) == 2
    assert main(["diagram", "--poly", "abc"] + BASE) == 2
    assert main(["roundtrip", "--radial", "2"]) == 2


def test_cli_pw_report(tmp_path):
    out = tmp_path / "p"
    rc = main(["pw-report", "--radius", "1.0", "--count", "2",
               "--radial", "48", "--angular", "96", "--modes", "8",
               "--out", str(out), "--format", "csv"])
    assert rc == 0
    with open(out / "pw.csv") as fh:
        table = list(csv.reader(fh))
    assert table[0] == ["fn_id", "R", "N", "seminorm", "exp_type", "weyl_defect"]
    assert len(table) > 7


def test_cli_euclid(tmp_path):
    out = tmp_path / "e"
    rc = main(["euclid", "--out", str(out)])
    assert rc == 0
    rep = json.loads((out / "euclid.json").read_text())
    assert rep["roundtrip_sup_err"] < 1e-8
    assert rep["constcoeff_defect_xi2"] < 1e-8
    assert rep["exponential_type"] == pytest.approx(1.0, rel=5e-2)


def test_cli_euclid_adapts_mode_cutoffs_to_grid(tmp_path):
    # a boundary grid below the default cutoff demand trims the list instead
    # of failing, and one too coarse for any tail comparison is a config error
    out = tmp_path / "e96"
    rc = main(["euclid", "--radial", "32", "--angular", "96", "--modes", "8",
               "--out", str(out)])
    assert rc == 0
    rep = json.loads((out / "euclid.json").read_text())
    cutoffs = [k for k, _ in rep["mode_factorization"]["tail_norms"]]
    assert cutoffs == [4, 8, 16]

    rc = main(["euclid", "--radial", "32", "--angular", "48", "--modes", "8",
               "--out", str(tmp_path / "e48")])
    assert rc == 2


def test_cli_module_entrypoint():
    r = subprocess.run([sys.executable, "-m", "horofourier.cli", "--help"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0
    for sub in ("roundtrip", "pw-report", "diagram", "solve", "euclid"):
        assert sub in r.stdout
