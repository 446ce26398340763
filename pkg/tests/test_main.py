"""
Command-line runs end to end.
"""
import csv

import pytest

from viscorod.main import EXIT_CONFIG, EXIT_OK, build_parser, run
from viscorod.sweep import RESULTS_HEADER


@pytest.fixture(autouse=True)
def isolated(monkeypatch, tmp_path):
    for name in ("VISCOROD_LOG_LEVEL", "VISCOROD_WORKERS", "VISCOROD_OTLP_ENDPOINT"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("HOME", str(tmp_path / "home"))
    monkeypatch.chdir(tmp_path)


def write_cfg(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text, encoding="utf-8")
    return str(path)


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_parser_defaults():
    args = build_parser().parse_args([])
    assert args.command == "run"
    assert args.strict is None and args.oracle_check is None


def test_fixed_end_is_at_rest(tmp_path):
    cfg = write_cfg(tmp_path, "model = elastic\nx_grid = 0\noutputs = displacement\nout = out\n")
    assert run(["run", "-c", cfg]) == EXIT_OK
    results = tmp_path / "out" / "results.csv"
    assert results.read_text(encoding="utf-8").splitlines()[0] == ",".join(RESULTS_HEADER)
    rows = read_rows(results)
    assert len(rows) == 6
    assert all(float(r["value"]) == 0.0 for r in rows)
    assert [float(r["t"]) for r in rows] == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]


def test_outputs_and_grid_order(tmp_path):
    cfg = write_cfg(tmp_path, "model = elastic\nx_grid = 0.5, 1\nt_grid = 0.5, 1\n")
    assert run(["run", "-c", cfg, "--out", "res"]) == EXIT_OK
    rows = read_rows(tmp_path / "res" / "results.csv")
    keys = [(float(r["x"]), float(r["t"]), r["quantity"]) for r in rows]
    assert keys == [
        (0.5, 0.5, "displacement"), (0.5, 0.5, "stress"),
        (0.5, 1.0, "displacement"), (0.5, 1.0, "stress"),
        (1.0, 0.5, "displacement"), (1.0, 0.5, "stress"),
        (1.0, 1.0, "displacement"), (1.0, 1.0, "stress"),
    ]
    for name in ("modes.csv", "diagnostics.txt"):
        assert (tmp_path / "res" / name).exists()
    report = (tmp_path / "res" / "diagnostics.txt").read_text(encoding="utf-8")
    for title in ("configuration", "assumption checks", "mode set", "cut-side calibration", "sample flags"):
        assert f"== {title} ==" in report


def test_runs_are_deterministic(tmp_path):
    cfg = write_cfg(tmp_path, "model = zener alpha=0.5 a=0.2 b=0.6\nx_grid = 0.5\nt_grid = 0.5, 1\nn_max = 16\n")
    assert run(["run", "-c", cfg, "--out", "a"]) == EXIT_OK
    assert run(["run", "-c", cfg, "--out", "b", "--workers", "2"]) == EXIT_OK
    first = (tmp_path / "a" / "results.csv").read_bytes()
    assert first == (tmp_path / "b" / "results.csv").read_bytes()
    assert (tmp_path / "a" / "modes.csv").read_bytes() == (tmp_path / "b" / "modes.csv").read_bytes()


@pytest.mark.parametrize(
    "text",
    [
        "model = zener alpha=0.5 a=0.7 b=0.6\n",
        "model = elastic\nx_grid = 2\n",
        "model = hilfer a=0.5 alpha=0.3 b0=1 b1=0.5 b2=0.2 beta0=0.4 beta1=0.6 beta2=0.9\n",
    ],
)
def test_bad_config_exit_code(tmp_path, text):
    assert run(["run", "-c", write_cfg(tmp_path, text)]) == EXIT_CONFIG
    assert not (tmp_path / "out").exists()


def test_missing_model_on_command_line():
    assert run(["run", "--nx", "2"]) == EXIT_CONFIG


def test_modes_command(tmp_path):
    assert run(["modes", "--model", "elastic", "--n-max", "8", "--out", "m"]) == EXIT_OK
    rows = read_rows(tmp_path / "m" / "modes.csv")
    assert len(rows) == 8
    assert all(float(r["re_s"]) == 0.0 for r in rows)
    assert not (tmp_path / "m" / "results.csv").exists()


@pytest.mark.slow
def test_oracle_check_passes(tmp_path):
    cfg = write_cfg(
        tmp_path,
        "model = zener alpha=0.5 a=0.2 b=0.6\nx_grid = 0.5, 1\nt_grid = 0, 0.5, 2\n"
        "oracle_check = true\nstrict = true\n",
    )
    assert run(["run", "-c", cfg]) == EXIT_OK
    report = (tmp_path / "out" / "diagnostics.txt").read_text(encoding="utf-8")
    assert "== oracle ==" in report
    assert "8 samples compared" in report
    assert ": pass" in report
