"""
配置管理模块
Run configuration: environment (.env) → flat key = value file → command-line overrides.
"""
import logging
import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np
from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .constitutive import ConstitutiveModel, parse_model
from .errors import ConfigError, ModelSpecError
from .forcing import ForcingSignal, Heaviside, parse_forcing
from .modes import DEFAULT_N_MAX, MAX_MODES

logger = logging.getLogger(__name__)

CONFIG_FILE_NAME = "viscorod.cfg"
DEFAULT_NX = 5
DEFAULT_NT = 6
DEFAULT_TMAX = 5.0

_FILE_KEYS = (
    "model", "kappa", "forcing", "x_grid", "t_grid", "nx", "nt", "tmax", "outputs",
    "n_max", "max_modes", "tol", "oracle_check", "out", "workers", "strict", "unsafe_model",
    "log_level", "telemetry",
)
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class Quantity(str, Enum):
    """Output quantities of a sweep"""
    DISPLACEMENT = "displacement"
    STRESS = "stress"


class LoggingConfig(BaseModel):
    """Logging configuration"""
    level: str = Field(default="INFO", description="Logging level")
    format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log format string"
    )

    @field_validator("level")
    @classmethod
    def _known_level(cls, v: str) -> str:
        level = v.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown logging level '{v}'")
        return level


class RunConfig(BaseModel):
    """One sweep: model, load, grids and accuracy settings"""
    model_config = ConfigDict(frozen=True)

    model: ConstitutiveModel = Field(description="Constitutive model")
    kappa: float = Field(gt=0.0, description="Rod parameter κ")
    forcing: ForcingSignal = Field(default_factory=Heaviside, description="Tip force F(t)")
    x_grid: Tuple[float, ...] = Field(description="Positions in [0, 1]")
    t_grid: Tuple[float, ...] = Field(description="Times >= 0")
    outputs: Tuple[Quantity, ...] = Field(default=(Quantity.DISPLACEMENT, Quantity.STRESS))
    n_max: int = Field(default=DEFAULT_N_MAX, ge=1, le=4096, description="Number of modes")
    max_modes: int = Field(
        default=MAX_MODES, ge=1, le=16384, description="Ceiling for growing the mode set when the residue tail exceeds tol/2"
    )
    tol: float = Field(default=1e-6, ge=1e-10, le=1e-2, description="Target absolute error per sample")
    oracle_check: bool = Field(default=False, description="Cross-check kernels against the Bromwich oracle")
    out: Path = Field(default=Path("out"), description="Output directory")
    workers: int = Field(default=1, ge=1, description="Sweep threads")
    strict: bool = Field(default=False, description="Accuracy failures make the run fail")
    unsafe_model: bool = Field(default=False, description="Allow models outside the normalisation assumptions")
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    telemetry: bool = Field(default=False, description="Export spans over OTLP")
    otlp_endpoint: Optional[str] = Field(default=None, description="OTLP gRPC endpoint")

    @field_validator("x_grid")
    @classmethod
    def _check_x_grid(cls, v):
        _check_grid(v)
        if v[0] < 0.0 or v[-1] > 1.0:
            raise ValueError("positions must lie in [0, 1]")
        return v

    @field_validator("t_grid")
    @classmethod
    def _check_t_grid(cls, v):
        _check_grid(v)
        if v[0] < 0.0:
            raise ValueError("times must be >= 0")
        return v

    @field_validator("outputs")
    @classmethod
    def _check_outputs(cls, v):
        if not v:
            raise ValueError("at least one output quantity is required")
        if len(set(v)) != len(v):
            raise ValueError("output quantities repeat")
        return v

    @model_validator(mode="after")
    def _check_model_safety(self):
        if self.model.kind == "hilfer" and not self.unsafe_model:
            raise ValueError(
                "hilfer models violate the normalisation assumptions; set unsafe_model = true to run them"
            )
        return self


def _check_grid(v) -> None:
    if not v:
        raise ValueError("grid is empty")
    if any(not np.isfinite(p) for p in v):
        raise ValueError("grid values must be finite")
    if any(b <= a for a, b in zip(v, v[1:])):
        raise ValueError("grid must be strictly increasing")


def _parse_bool(raw: str) -> bool:
    text = str(raw).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise ValueError(f"expected a boolean, got '{raw}'")


def _parse_list(raw: str) -> Tuple[float, ...]:
    return tuple(float(p) for p in str(raw).split(",") if p.strip())


def _uniform(lo: float, hi: float, n: int) -> Tuple[float, ...]:
    if n < 1:
        raise ValueError("grid size must be >= 1")
    if n == 1:
        return (hi,)
    return tuple(float(v) for v in np.linspace(lo, hi, n))


class ConfigManager:
    """配置管理器 - 基于配置文件"""

    def __init__(self,
                 config_file: Optional[str] = None,
                 env_file: Optional[str] = None,
                 overrides: Optional[Mapping[str, Any]] = None):
        """
        Args:
            config_file: Run configuration file (flat key = value)
            env_file: Environment file path (optional)
            overrides: Command-line values; they win over the file
        """
        self.config_file = config_file
        self.env_file = env_file
        self.overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
        self.lines: Dict[str, int] = {}
        self.base_dir: Optional[Path] = None

    def _load_environment(self) -> None:
        """加载环境变量"""
        if self.env_file:
            env_path = Path(self.env_file).expanduser()
            if env_path.exists():
                load_dotenv(env_path)
            else:
                logger.warning(f"env file {env_path} not found")
            return
        for candidate in (Path.cwd() / ".env", Path.home() / ".env"):
            if candidate.exists():
                load_dotenv(candidate)
                return

    def _locate_file(self) -> Optional[Path]:
        if self.config_file is not None:
            path = Path(self.config_file).expanduser()
            if not path.exists():
                raise ConfigError(f"configuration file {path} does not exist")
            return path
        # 相对于运行目录, 然后用户主目录
        for candidate in (Path(CONFIG_FILE_NAME), Path.home() / f".{CONFIG_FILE_NAME}"):
            if candidate.exists():
                return candidate
        return None

    def _scan_lines(self, path: Path) -> Dict[str, int]:
        """key → 1-based line of its last assignment"""
        lines = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, text in enumerate(fh, start=1):
                stripped = text.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                stripped = stripped.removeprefix("export ").strip()
                key = stripped.split("=", 1)[0].strip()
                if key:
                    lines[key] = lineno
        return lines

    def _load_file(self) -> Dict[str, str]:
        """从配置文件加载配置"""
        path = self._locate_file()
        if path is None:
            logger.info("no run configuration file found; using command-line values only")
            return {}
        logger.info(f"Using run configuration: {path}")
        self.lines = self._scan_lines(path)
        self.base_dir = path.parent
        raw = dotenv_values(path)
        for key in raw:
            if key not in _FILE_KEYS:
                raise ConfigError(f"unknown key '{key}'", field=key, line=self.lines.get(key))
        return {k: v for k, v in raw.items() if v is not None and v.strip() != ""}

    def _env_defaults(self) -> Dict[str, Any]:
        values: Dict[str, Any] = {}
        if os.getenv("VISCOROD_LOG_LEVEL"):
            values["log_level"] = os.environ["VISCOROD_LOG_LEVEL"]
        if os.getenv("VISCOROD_WORKERS"):
            values["workers"] = os.environ["VISCOROD_WORKERS"]
        return values

    def _fail(self, field: str, message: str):
        line = None if field in self.overrides else self.lines.get(field)
        raise ConfigError(message, field=field, line=line) from None

    def _convert(self, field: str, raw: Any, convert):
        if not isinstance(raw, str):
            return raw
        try:
            return convert(raw)
        except (ValueError, ModelSpecError) as exc:
            self._fail(field, str(exc))

    def load(self) -> RunConfig:
        """Resolve the run configuration; ConfigError names the field and line at fault."""
        self._load_environment()
        merged: Dict[str, Any] = self._env_defaults()
        merged.update(self._load_file())
        merged.update(self.overrides)

        if "model" not in merged:
            raise ConfigError("missing required key", field="model")

        values: Dict[str, Any] = {
            "model": self._convert("model", merged["model"], parse_model),
            "kappa": self._convert("kappa", merged.get("kappa", "1"), float),
        }
        if "forcing" in merged:
            values["forcing"] = self._convert(
                "forcing", merged["forcing"], lambda text: parse_forcing(text, self.base_dir)
            )

        if "x_grid" in merged:
            values["x_grid"] = self._convert("x_grid", merged["x_grid"], _parse_list)
        else:
            nx = self._convert("nx", merged.get("nx", str(DEFAULT_NX)), int)
            try:
                values["x_grid"] = _uniform(0.0, 1.0, nx)
            except ValueError as exc:
                self._fail("nx", str(exc))
        if "t_grid" in merged:
            values["t_grid"] = self._convert("t_grid", merged["t_grid"], _parse_list)
        else:
            nt = self._convert("nt", merged.get("nt", str(DEFAULT_NT)), int)
            tmax = self._convert("tmax", merged.get("tmax", str(DEFAULT_TMAX)), float)
            if not tmax > 0.0:
                self._fail("tmax", "tmax must be > 0")
            try:
                values["t_grid"] = _uniform(0.0, tmax, nt)
            except ValueError as exc:
                self._fail("nt", str(exc))

        if "outputs" in merged:
            values["outputs"] = self._convert(
                "outputs", merged["outputs"],
                lambda text: tuple(Quantity(p.strip()) for p in text.split(",") if p.strip()),
            )
        for key, convert in (("n_max", int), ("max_modes", int), ("tol", float), ("workers", int), ("out", Path)):
            if key in merged:
                values[key] = self._convert(key, merged[key], convert)
        for key in ("oracle_check", "strict", "unsafe_model", "telemetry"):
            if key in merged:
                values[key] = self._convert(key, merged[key], _parse_bool)
        if "log_level" in merged:
            values["logging"] = {"level": merged["log_level"]}
        values["otlp_endpoint"] = os.getenv("VISCOROD_OTLP_ENDPOINT") or None

        try:
            return RunConfig(**values)
        except ValidationError as exc:
            err = exc.errors()[0]
            loc = err.get("loc", ())
            field = str(loc[0]) if loc else "model"
            if field == "logging":
                field = "log_level"
            message = err.get("msg", "invalid value").removeprefix("Value error, ")
            self._fail(field, message)
