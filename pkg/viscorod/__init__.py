from .config_manager import ConfigManager, Quantity, RunConfig
from .constitutive import Elastic, FractionalZener, HilferFluid, PowerLaw, eval_M, parse_model
from .forcing import Heaviside, compose_sigma, compose_u, parse_forcing
from .kernels import KernelKind, KernelSpec, eval_P, eval_sigma_H
from .main import run, run_pipeline
from .modes import build_mode_set
from .telemetry_setup import TelemetrySetup

__version__ = "1.0.0"
