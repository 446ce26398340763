"""
外力信号 F(t)
Tip-force signals.  Every signal is causal and may be delayed:
F(t) = F0(t − delay) for t >= delay and 0 before.
"""
import csv
import logging
import math
from pathlib import Path
from typing import Callable, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator
from scipy.special import gamma
from typing_extensions import Annotated

from ..constitutive._grammar import describe_validation_error, split_spec, to_floats
from ..errors import ModelSpecError

logger = logging.getLogger(__name__)


class _SignalBase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    delay: float = Field(default=0.0, ge=0.0, description="Shift of the signal to the right")

    def undelayed(self):
        return self.model_copy(update={"delay": 0.0})

    def describe(self) -> str:
        text = self._describe()
        return f"{text} delay={self.delay!r}" if self.delay else text

    def _describe(self) -> str:
        return self.kind


class Heaviside(_SignalBase):
    """Unit step."""
    kind: Literal["heaviside"] = "heaviside"


class Impulse(_SignalBase):
    """Dirac impulse; u = P under this load."""
    kind: Literal["impulse"] = "impulse"


class Sinusoid(_SignalBase):
    """A sin(ω t) switched on at t = 0."""
    kind: Literal["sinusoid"] = "sinusoid"
    omega: float = Field(gt=0.0, description="Angular frequency ω")
    amplitude: float = Field(default=1.0, description="Amplitude A")

    def _describe(self) -> str:
        return f"sinusoid omega={self.omega!r} amplitude={self.amplitude!r}"


class PowerStep(_SignalBase):
    """F(t) = t^{α−1}/Γ(α), the original of s^{−α}."""
    kind: Literal["powerstep"] = "powerstep"
    alpha: float = Field(gt=0.0, lt=1.0)

    def _describe(self) -> str:
        return f"powerstep alpha={self.alpha!r}"


class Tabulated(_SignalBase):
    """Piecewise-linear samples; the last value is held beyond the table."""
    kind: Literal["tabulated"] = "tabulated"
    times: Tuple[float, ...]
    values: Tuple[float, ...]
    source: Optional[str] = Field(default=None, description="CSV file the samples came from")

    @model_validator(mode="after")
    def _check_grid(self):
        if len(self.times) < 2 or len(self.times) != len(self.values):
            raise ValueError("tabulated signal needs at least two (t, F) pairs of equal length")
        if self.times[0] != 0.0:
            raise ValueError("tabulated time grid must start at 0")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("tabulated time grid must be strictly increasing")
        return self

    def truncated(self, t_end: float) -> "Tabulated":
        """The samples restricted to [0, t_end], closed by an interpolated end point."""
        times = [t for t in self.times if t < t_end]
        values = [self.values[i] for i in range(len(times))]
        times.append(t_end)
        values.append(float(np.interp(t_end, self.times, self.values)))
        return self.model_copy(update={"times": tuple(times), "values": tuple(values)})

    def _describe(self) -> str:
        return f"tabulated path={self.source}" if self.source else f"tabulated ({len(self.times)} samples)"


ForcingSignal = Annotated[
    Union[Heaviside, Impulse, Sinusoid, PowerStep, Tabulated], Field(discriminator="kind")
]

_signal_adapter = TypeAdapter(ForcingSignal)


def eval_F(signal, t: float) -> float:
    """F(t); zero before the delay.  The impulse is reported as 0 off its
    support and +inf at it."""
    tau = t - signal.delay
    if tau < 0.0:
        return 0.0
    if isinstance(signal, Heaviside):
        return 1.0
    if isinstance(signal, Impulse):
        return math.inf if tau == 0.0 else 0.0
    if isinstance(signal, Sinusoid):
        return signal.amplitude * math.sin(signal.omega * tau)
    if isinstance(signal, PowerStep):
        if tau == 0.0:
            return math.inf
        return tau ** (signal.alpha - 1.0) / gamma(signal.alpha)
    return float(np.interp(tau, signal.times, signal.values))


def laplace_transform(signal) -> Optional[Callable]:
    """Vectorised s ↦ F̃(s) for preset signals, None for tabulated ones."""
    delay = signal.delay

    def shifted(base: Callable) -> Callable:
        if delay == 0.0:
            return base
        return lambda s: base(s) * np.exp(-s * delay)

    if isinstance(signal, Heaviside):
        return shifted(lambda s: 1.0 / s)
    if isinstance(signal, Impulse):
        return shifted(lambda s: np.ones_like(s))
    if isinstance(signal, Sinusoid):
        a, w = signal.amplitude, signal.omega
        return shifted(lambda s: a * w / (s * s + w * w))
    if isinstance(signal, PowerStep):
        alpha = signal.alpha
        return shifted(lambda s: np.exp(-alpha * np.log(s)))
    return None


def laplace_F(signal, s):
    """F̃(s) for preset signals; None for tabulated signals."""
    transform = laplace_transform(signal)
    return None if transform is None else transform(np.asarray(s, dtype=complex))


def load_tabulated(path: Union[str, Path], delay: float = 0.0) -> Tabulated:
    """Read a two-column (t, F) CSV; a non-numeric first row is taken as header."""
    path = Path(path)
    times, values = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise ModelSpecError(f"{path}:{lineno}: expected two columns (t, F)")
            try:
                t_val, f_val = float(row[0]), float(row[1])
            except ValueError:
                if not times and lineno == 1:
                    continue
                raise ModelSpecError(f"{path}:{lineno}: non-numeric sample {row[:2]}") from None
            times.append(t_val)
            values.append(f_val)
    try:
        return Tabulated(times=tuple(times), values=tuple(values), delay=delay, source=str(path))
    except ValidationError as exc:
        raise ModelSpecError(f"{path}: {describe_validation_error(exc)}") from None


_KINDS = ("heaviside", "impulse", "sinusoid", "powerstep", "tabulated")


def parse_forcing(text: str, base_dir: Optional[Path] = None):
    """Parse `heaviside`, `impulse`, `sinusoid omega=.. amplitude=..`,
    `powerstep alpha=..` or `tabulated path=..`, each with optional `delay=..`."""
    kind, params = split_spec(text)
    if kind not in _KINDS:
        raise ModelSpecError(f"unknown forcing kind '{kind}' (expected one of {', '.join(_KINDS)})")
    if kind == "tabulated":
        path = params.pop("path", None)
        if path is None:
            raise ModelSpecError("tabulated forcing needs path=<csv>")
        extra = sorted(set(params) - {"delay"})
        if extra:
            raise ModelSpecError(f"unknown parameter(s) for tabulated: {', '.join(extra)}")
        delay = to_floats(params).get("delay", 0.0)
        resolved = Path(path) if base_dir is None or Path(path).is_absolute() else Path(base_dir) / path
        return load_tabulated(resolved, delay=delay)
    values = to_floats(params)
    try:
        return _signal_adapter.validate_python({"kind": kind, **values})
    except ValidationError as exc:
        raise ModelSpecError(describe_validation_error(exc)) from None
