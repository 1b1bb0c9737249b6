import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinladder.analysis import observables
from spinladder.cli import main
from spinladder.config import ConfigError, SimulationConfig, config_to_text, parse_config, run_simulation
from spinladder.io import (
    CSV_COLUMNS,
    emit_plot_script,
    population_column,
    read_csv,
    read_csv_header,
    write_csv,
    write_manifest,
)
from spinladder.spin import make_operators

SMALL = """\
# small full-ladder run
twice_s=4
d=0.1
h_ac=0.02
protocol=full-gqoab
t_max=50
"""


def test_parse_defaults():
    cfg = parse_config(SMALL)
    assert cfg.twice_s == 4 and cfg.d == 0.1 and cfg.hz == 0.0
    assert cfg.frame == "lab" and cfg.method == "exponential-midpoint"
    assert cfg.initial_m == 2.0


@pytest.mark.parametrize("text,line,fragment", [
    (SMALL + "colour=red\n", 7, "unknown key"),
    (SMALL + "d=0.2\n", 7, "duplicate"),
    (SMALL.replace("h_ac=0.02", "h_ac=fast"), 4, "malformed"),
    (SMALL.replace("twice_s=4", "twice_s=4.5"), 2, "malformed integer"),
    (SMALL + "just words\n", 7, "key=value"),
    (SMALL.replace("protocol=full-gqoab", "protocol=ladder"), 5, "s_prime"),
    (SMALL.replace("protocol=full-gqoab", "protocol=magic"), 5, "protocol"),
    (SMALL + "frame=sideways\n", 7, "frame"),
])
def test_errors_name_the_line(text, line, fragment):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert f"line {line}:" in str(exc.value)
    assert fragment in str(exc.value)


def test_missing_keys():
    with pytest.raises(ConfigError, match="missing required keys: t_max"):
        parse_config(SMALL.replace("t_max=50\n", ""))


@given(
    twice_s=st.integers(2, 30),
    h_ac=st.floats(1e-4, 1.0),
    t_max=st.floats(1.0, 1e4),
    d=st.floats(1e-3, 2.0),
    hz=st.floats(-1.0, 1.0),
    frame=st.sampled_from(["lab", "rotating"]),
)
def test_config_text_round_trip(twice_s, h_ac, t_max, d, hz, frame):
    cfg = SimulationConfig(twice_s=twice_s, h_ac=h_ac, protocol="full-gqoab", t_max=t_max, d=d, hz=hz,
                           frame=frame).validate()
    assert parse_config(config_to_text(cfg)) == cfg


def test_population_column_names():
    assert population_column(10) == "p_10"
    assert population_column(9.5) == "p_9_5"
    assert population_column(-10) == "p_-10"
    assert population_column(-0.5) == "p_-0_5"


@pytest.fixture(scope="module")
def small_series():
    _, traj = run_simulation(parse_config(SMALL))
    return observables(traj, make_operators(2))


def test_csv_exact_round_trip(tmp_path, small_series):
    path = tmp_path / "trajectory.csv"
    write_csv(small_series, path, populations=True)
    raw = path.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    header = read_csv_header(path)
    assert header == list(CSV_COLUMNS) + ["p_2", "p_1", "p_0", "p_-1", "p_-2"]
    data = read_csv(path)
    # repr() formatting round-trips every float bit for bit
    np.testing.assert_array_equal(data["sz"], small_series.sz)
    np.testing.assert_array_equal(data["t"], small_series.times)
    np.testing.assert_array_equal(data["p_-2"], small_series.populations[:, -1])
    assert raw.splitlines()[1].startswith(b"0.0,")


def test_csv_is_deterministic(tmp_path, small_series):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(small_series, a)
    write_csv(small_series, b)
    assert a.read_bytes() == b.read_bytes()


def test_manifest_checksums(tmp_path, small_series):
    csv = tmp_path / "trajectory.csv"
    write_csv(small_series, csv)
    write_manifest(tmp_path / "manifest.json", {"x": np.float64(1.5)}, [csv])
    body = json.loads((tmp_path / "manifest.json").read_text())
    assert body["x"] == 1.5
    assert body["files"]["trajectory.csv"]["bytes"] == csv.stat().st_size
    assert len(body["files"]["trajectory.csv"]["sha256"]) == 64


def test_plot_script(tmp_path, small_series):
    csv = tmp_path / "trajectory.csv"
    write_csv(small_series, csv)
    text = emit_plot_script(csv, ["sx", "sz", "s_fidelity"], s=2)
    assert "using 1:($2/2.0) with lines lw 1" in text
    assert "using 1:($4/2.0) with lines lw 3" in text
    assert "using 1:($5/4.0) with lines lw 3" in text
    raw = emit_plot_script(csv, ["sz"], normalize_by_s=False)
    assert "using 1:4 with lines lw 3" in raw
    with pytest.raises(ValueError):
        emit_plot_script(csv, ["bogus"], s=2)
    with pytest.raises(ValueError):
        emit_plot_script(csv, [], s=2)


# --- command line -----------------------------------------------------------

def test_cli_simulate(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(SMALL)
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfg), "--out", str(out), "--populations"]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["twice_s"] == 4
    assert manifest["convergence_report"] < 1e-6
    assert "sha256" in manifest["files"]["trajectory.csv"]
    assert "p_-2" in read_csv_header(out / "trajectory.csv")
    # the plot script picks S up from the manifest
    assert main(["plot-script", "--csv", str(out / "trajectory.csv"), "--columns", "sz"]) == 0
    assert "($4/2.0)" in capsys.readouterr().out


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text(SMALL + "colour=red\n")
    assert main(["simulate", "--config", str(bad)]) == 1
    err = capsys.readouterr().err
    assert err.startswith("spinladder-error code=1 kind=validation") and "line 7" in err
    assert main(["simulate", "--config", str(tmp_path / "missing.cfg")]) == 4
    assert "kind=io" in capsys.readouterr().err
    assert main(["bogus"]) == 1
    coarse = tmp_path / "coarse.cfg"
    coarse.write_text(SMALL + "dt=1.0\n")
    assert main(["simulate", "--config", str(coarse), "--out", str(tmp_path / "c")]) == 1
    assert "fewer than 20 steps" in capsys.readouterr().err
    # legal but too coarse to pass the dt/2 comparison
    coarse.write_text(SMALL + "dt=0.5\n")
    assert main(["simulate", "--config", str(coarse), "--out", str(tmp_path / "c")]) == 2
    assert "kind=convergence" in capsys.readouterr().err


def test_cli_sweep(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(SMALL)
    out = tmp_path / "sweep"
    assert main(["sweep", "--config", str(cfg), "--axis", "h_ac", "--values", "0.02,0.03", "--out", str(out)]) == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0].startswith("h_ac,period")
    assert [ln.split(",")[0] for ln in lines[1:]] == ["0.02", "0.03"]
    assert (out / "row001" / "manifest.json").exists()
    assert main(["sweep", "--config", str(cfg), "--axis", "h_ac", "--values", "x"]) == 1


def test_cli_check_subset(capsys):
    assert main(["check", "--only", "6"]) == 0
    assert "PASS [ 6]" in capsys.readouterr().out
