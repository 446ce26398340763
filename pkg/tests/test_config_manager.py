"""
Layered run configuration.
"""
import numpy as np
import pytest

from viscorod.config_manager import ConfigManager, Quantity
from viscorod.constitutive import FractionalZener
from viscorod.errors import ConfigError
from viscorod.forcing import Sinusoid, Tabulated


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    for name in ("VISCOROD_LOG_LEVEL", "VISCOROD_WORKERS", "VISCOROD_OTLP_ENDPOINT"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("HOME", str(tmp_path / "home"))
    monkeypatch.chdir(tmp_path)


def write_cfg(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


ZENER = "model = zener alpha=0.5 a=0.2 b=0.6\n"


class TestLoad:
    def test_defaults(self, tmp_path):
        config = ConfigManager(config_file=write_cfg(tmp_path, ZENER)).load()
        assert config.model == FractionalZener(alpha=0.5, a=0.2, b=0.6)
        assert config.kappa == 1.0
        assert config.forcing.kind == "heaviside"
        np.testing.assert_allclose(config.x_grid, np.linspace(0.0, 1.0, 5))
        np.testing.assert_allclose(config.t_grid, np.linspace(0.0, 5.0, 6))
        assert config.outputs == (Quantity.DISPLACEMENT, Quantity.STRESS)
        assert config.n_max == 64 and config.tol == 1e-6
        assert config.max_modes == 4096
        assert not config.strict and not config.oracle_check

    def test_explicit_grids_and_options(self, tmp_path):
        text = ZENER + (
            "kappa = 2\n"
            "x_grid = 0.25, 0.5\n"
            "t_grid = 0.5,1,2\n"
            "outputs = stress\n"
            "forcing = sinusoid omega=2 amplitude=0.5\n"
            "strict = yes\n"
            "oracle_check = on\n"
            "workers = 3\n"
            "max_modes = 512\n"
        )
        config = ConfigManager(config_file=write_cfg(tmp_path, text)).load()
        assert config.kappa == 2.0
        assert config.x_grid == (0.25, 0.5)
        assert config.t_grid == (0.5, 1.0, 2.0)
        assert config.outputs == (Quantity.STRESS,)
        assert config.forcing == Sinusoid(omega=2.0, amplitude=0.5)
        assert config.strict and config.oracle_check
        assert config.workers == 3
        assert config.max_modes == 512

    def test_uniform_grid_from_counts(self, tmp_path):
        config = ConfigManager(config_file=write_cfg(tmp_path, ZENER + "nx = 3\nnt = 5\ntmax = 2\n")).load()
        assert config.x_grid == (0.0, 0.5, 1.0)
        np.testing.assert_allclose(config.t_grid, [0.0, 0.5, 1.0, 1.5, 2.0])

    def test_tabulated_path_relative_to_file(self, tmp_path):
        (tmp_path / "load.csv").write_text("t,F\n0,0\n1,1\n2,1\n", encoding="utf-8")
        config = ConfigManager(config_file=write_cfg(tmp_path, ZENER + "forcing = tabulated path=load.csv\n")).load()
        assert isinstance(config.forcing, Tabulated)
        assert config.forcing.values == (0.0, 1.0, 1.0)

    def test_default_file_in_working_directory(self, tmp_path):
        write_cfg(tmp_path, ZENER + "kappa = 0.5\n", name="viscorod.cfg")
        assert ConfigManager().load().kappa == 0.5

    def test_hilfer_with_unsafe_flag(self, tmp_path):
        text = (
            "model = hilfer a=0.5 alpha=0.3 b0=1 b1=0.5 b2=0.2 beta0=0.4 beta1=0.6 beta2=0.9\n"
            "unsafe_model = true\n"
        )
        assert ConfigManager(config_file=write_cfg(tmp_path, text)).load().unsafe_model


class TestLayers:
    def test_overrides_win(self, tmp_path):
        config = ConfigManager(config_file=write_cfg(tmp_path, ZENER + "kappa = 2\n"),
                               overrides={"kappa": "3", "tol": None}).load()
        assert config.kappa == 3.0
        assert config.tol == 1e-6

    def test_environment_defaults(self, tmp_path, monkeypatch):
        monkeypatch.setenv("VISCOROD_LOG_LEVEL", "warning")
        monkeypatch.setenv("VISCOROD_WORKERS", "4")
        config = ConfigManager(config_file=write_cfg(tmp_path, ZENER)).load()
        assert config.logging.level == "WARNING"
        assert config.workers == 4

    def test_file_beats_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("VISCOROD_LOG_LEVEL", "warning")
        config = ConfigManager(config_file=write_cfg(tmp_path, ZENER + "log_level = debug\n")).load()
        assert config.logging.level == "DEBUG"

    def test_command_line_only(self):
        config = ConfigManager(overrides={"model": "elastic", "nx": "2", "nt": "2", "tmax": "1"}).load()
        assert config.model.kind == "elastic"
        assert config.x_grid == (0.0, 1.0)


class TestErrors:
    def test_restriction_names_line(self, tmp_path):
        path = write_cfg(tmp_path, "# rod\nkappa = 1\nmodel = zener alpha=0.5 a=0.7 b=0.6\n")
        with pytest.raises(ConfigError) as info:
            ConfigManager(config_file=path).load()
        assert info.value.field == "model"
        assert info.value.line == 3
        assert "thermodynamic restriction" in str(info.value)

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            ConfigManager(config_file=write_cfg(tmp_path, ZENER + "kapa = 1\n")).load()
        assert info.value.field == "kapa"
        assert info.value.line == 2

    @pytest.mark.parametrize(
        "line, field",
        [
            ("x_grid = 0, 0.5, 1.2", "x_grid"),
            ("t_grid = 1, 0.5", "t_grid"),
            ("kappa = -1", "kappa"),
            ("kappa = abc", "kappa"),
            ("strict = maybe", "strict"),
            ("outputs = strain", "outputs"),
            ("tol = 1", "tol"),
            ("nx = 0", "nx"),
            ("tmax = 0", "tmax"),
            ("log_level = loud", "log_level"),
            ("forcing = sinusoid", "forcing"),
            ("max_modes = 0", "max_modes"),
        ],
    )
    def test_invalid_value(self, tmp_path, line, field):
        with pytest.raises(ConfigError) as info:
            ConfigManager(config_file=write_cfg(tmp_path, ZENER + line + "\n")).load()
        assert info.value.field == field
        assert info.value.line == 2

    def test_override_error_has_no_line(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            ConfigManager(config_file=write_cfg(tmp_path, ZENER), overrides={"kappa": "0"}).load()
        assert info.value.field == "kappa"
        assert info.value.line is None

    def test_hilfer_needs_unsafe_flag(self, tmp_path):
        text = "model = hilfer a=0.5 alpha=0.3 b0=1 b1=0.5 b2=0.2 beta0=0.4 beta1=0.6 beta2=0.9\n"
        with pytest.raises(ConfigError) as info:
            ConfigManager(config_file=write_cfg(tmp_path, text)).load()
        assert info.value.field == "model"
        assert "unsafe_model" in str(info.value)

    def test_missing_model(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            ConfigManager(config_file=write_cfg(tmp_path, "kappa = 1\n")).load()
        assert info.value.field == "model"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            ConfigManager(config_file=str(tmp_path / "absent.cfg")).load()
