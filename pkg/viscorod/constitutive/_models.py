"""
本构模型定义
Constitutive models: frozen pydantic values, one per material law.

Every model knows how to produce the quotient M(s)^2 from log(s); the
public evaluation functions in `_evaluate` handle domain checks and the
square-root branch.  Working from log(s) lets the same code serve points
of the cut plane and the two cut limits q*exp(±i*pi).
"""
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Annotated

THERMODYNAMIC_RESTRICTION = "thermodynamic restriction a ≤ b"

# removable singularity of (z - 1)/ln z at z = 1
_PHI_TAYLOR_RADIUS = 1e-4


class _ModelBase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    @property
    def is_hookean(self) -> bool:
        """True when M(s) ≡ 1 identically (Hooke law)."""
        return False

    def m_squared(self, log_s: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> str:
        """Canonical text of the model in the description grammar."""
        raise NotImplementedError


class Elastic(_ModelBase):
    """Hooke law, M ≡ 1."""

    kind: Literal["elastic"] = "elastic"

    @property
    def is_hookean(self) -> bool:
        return True

    def m_squared(self, log_s):
        return np.ones_like(log_s, dtype=complex)

    def describe(self) -> str:
        return "elastic"


class FractionalZener(_ModelBase):
    """Fractional standard linear solid:  M^2 = (1 + a s^α) / (1 + b s^α)."""

    kind: Literal["zener"] = "zener"
    alpha: float = Field(gt=0.0, lt=1.0, description="Common fractional order α")
    a: float = Field(gt=0.0, description="Stress relaxation coefficient")
    b: float = Field(gt=0.0, description="Strain retardation coefficient")

    @model_validator(mode="after")
    def _check_restriction(self):
        if self.a > self.b:
            raise ValueError(f"{THERMODYNAMIC_RESTRICTION} violated (a={self.a}, b={self.b})")
        return self

    @property
    def is_hookean(self) -> bool:
        return self.a == self.b

    def m_squared(self, log_s):
        if self.is_hookean:
            return np.ones_like(log_s, dtype=complex)
        z = np.exp(self.alpha * log_s)
        return (1.0 + self.a * z) / (1.0 + self.b * z)

    def describe(self) -> str:
        return f"zener alpha={self.alpha!r} a={self.a!r} b={self.b!r}"


def _phi(log_z: np.ndarray) -> np.ndarray:
    """(z - 1) / ln z evaluated from ln z, with the z = 1 point filled in."""
    u = np.expm1(log_z)
    near = np.abs(u) < _PHI_TAYLOR_RADIUS
    safe_log = np.where(near, 1.0, log_z)
    direct = u / safe_log
    taylor = 1.0 + u / 2.0 - u * u / 12.0
    return np.where(near, taylor, direct)


class PowerLaw(_ModelBase):
    """Distributed-order law with uniform weights:
    M^2 = [(as - 1)/ln(as)] / [(bs - 1)/ln(bs)].
    """

    kind: Literal["powerlaw"] = "powerlaw"
    a: float = Field(gt=0.0, description="Stress coefficient")
    b: float = Field(gt=0.0, description="Strain coefficient")

    @model_validator(mode="after")
    def _check_restriction(self):
        if self.a > self.b:
            raise ValueError(f"{THERMODYNAMIC_RESTRICTION} violated (a={self.a}, b={self.b})")
        return self

    @property
    def is_hookean(self) -> bool:
        return self.a == self.b

    def m_squared(self, log_s):
        if self.is_hookean:
            return np.ones_like(log_s, dtype=complex)
        return _phi(np.log(self.a) + log_s) / _phi(np.log(self.b) + log_s)

    def describe(self) -> str:
        return f"powerlaw a={self.a!r} b={self.b!r}"


class HilferFluid(_ModelBase):
    """Fluid-like law  M^2 = (1 + a s^α) / (b0 s^β0 + b1 s^β1 + b2 s^β2).

    Evaluatable everywhere on the cut plane, but M is unbounded as s → 0, so
    the mode and kernel pipelines only accept it behind an explicit flag.
    """

    kind: Literal["hilfer"] = "hilfer"
    a: float = Field(gt=0.0)
    alpha: float = Field(gt=0.0, lt=1.0)
    b0: float = Field(gt=0.0)
    b1: float = Field(gt=0.0)
    b2: float = Field(gt=0.0)
    beta0: float = Field(gt=0.0, le=1.0)
    beta1: float = Field(gt=0.0, le=1.0)
    beta2: float = Field(gt=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_order(self):
        if not (0.0 < self.alpha < self.beta0 < self.beta1 < self.beta2 <= 1.0):
            raise ValueError(
                "orders must satisfy 0 < alpha < beta0 < beta1 < beta2 ≤ 1 "
                f"(got alpha={self.alpha}, beta=({self.beta0}, {self.beta1}, {self.beta2}))"
            )
        return self

    def m_squared(self, log_s):
        num = 1.0 + self.a * np.exp(self.alpha * log_s)
        den = (
            self.b0 * np.exp(self.beta0 * log_s)
            + self.b1 * np.exp(self.beta1 * log_s)
            + self.b2 * np.exp(self.beta2 * log_s)
        )
        return num / den

    def describe(self) -> str:
        return (
            f"hilfer a={self.a!r} alpha={self.alpha!r} b0={self.b0!r} b1={self.b1!r} "
            f"b2={self.b2!r} beta0={self.beta0!r} beta1={self.beta1!r} beta2={self.beta2!r}"
        )


ConstitutiveModel = Annotated[
    Union[Elastic, FractionalZener, PowerLaw, HilferFluid], Field(discriminator="kind")
]


class ModelLimits(BaseModel):
    """Limits of M at |s| → ∞ (real part) and |s| → 0."""

    model_config = ConfigDict(frozen=True)

    c_inf: float = Field(gt=0.0, description="lim Re M(s), |s| → ∞")
    c_0: float = Field(gt=0.0, description="lim M(s), |s| → 0")


def model_limits(model) -> Optional[ModelLimits]:
    """Analytic limits, or None when only measured limits are available (HilferFluid)."""
    if isinstance(model, Elastic):
        return ModelLimits(c_inf=1.0, c_0=1.0)
    if isinstance(model, (FractionalZener, PowerLaw)):
        return ModelLimits(c_inf=float(np.sqrt(model.a / model.b)), c_0=1.0)
    return None
