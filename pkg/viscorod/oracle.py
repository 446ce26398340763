"""
独立的拉普拉斯反演 (Bromwich oracle)
Fourier-series inversion on the line Re s = sigma0 with Euler summation,
used to cross-check the residue/branch-cut kernels.

With half period T the approximation is

    f(t) ≈ e^{σ0 t}/T [ ½F(σ0) + Σ_k Re(F(σ0 + ikπ/T) e^{ikπt/T}) ].

`BromwichConfig.for_time` puts t at a quarter of the period, so
e^{ikπt/T} = i^k and consecutive pairs of terms alternate in sign; the
Euler step averages the partial sums over those pairs.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import comb

from .constitutive import eval_M
from .errors import AccuracyError, DomainError, EvaluationError
from .hyperbolic import cosh_ratio, sinh_ratio

logger = logging.getLogger(__name__)

DEFAULT_EPS = 1e-10


class BromwichConfig(BaseModel):
    """Parameters of one inversion."""

    model_config = ConfigDict(frozen=True)

    sigma0: float = Field(description="Abscissa of the inversion line")
    period_T: float = Field(gt=0.0, description="Full period of the Fourier series")
    n_terms: int = Field(default=8192, ge=64, description="Number of frequency terms (even)")
    euler_m: int = Field(default=32, ge=2, description="Order of the Euler averaging")
    tol: float = Field(default=1e-6, gt=0.0, description="Target absolute accuracy")

    @classmethod
    def for_time(
        cls,
        t: float,
        xi_max: Optional[float] = None,
        eps: float = DEFAULT_EPS,
        **kwargs,
    ) -> "BromwichConfig":
        """Line placed right of every pole; aliasing damped to about eps.

        The margin ln(1/eps)/period_T exceeds one for t < ln(1/eps)/4.  At
        later times it shrinks with t: a fixed margin would multiply the
        sum by e^{margin·t} and drown the result in cancellation.
        """
        if not t > 0.0:
            raise DomainError("the oracle needs t > 0")
        period_T = 4.0 * t
        base = 0.0 if xi_max is None else max(xi_max, 0.0)
        sigma0 = base + np.log(1.0 / eps) / period_T
        return cls(sigma0=float(sigma0), period_T=period_T, **kwargs)


@dataclass(frozen=True)
class InversionResult:
    value: float
    error: float

    def __float__(self) -> float:
        return self.value


def invert(transform: Callable, cfg: BromwichConfig, t: float) -> InversionResult:
    """Invert a vectorised Laplace transform at time t."""
    half = cfg.period_T / 2.0
    if not 0.0 < t < half:
        raise DomainError(f"t must lie in (0, period_T/2) = (0, {half:g})")
    n_terms = cfg.n_terms - cfg.n_terms % 2
    k = np.arange(1, n_terms + 1)
    s = cfg.sigma0 + 1j * k * (np.pi / half)
    with np.errstate(over="ignore", invalid="ignore"):
        values = np.asarray(transform(s), dtype=complex)
        head = complex(np.asarray(transform(np.array([cfg.sigma0 + 0j])), dtype=complex)[0])
    if not (np.all(np.isfinite(values)) and np.isfinite(head)):
        raise EvaluationError("transform is not finite on the inversion line")

    terms = (values * np.exp(1j * k * (np.pi * t / half))).real
    partial = 0.5 * head.real + np.cumsum(terms.reshape(-1, 2).sum(axis=1))

    m = cfg.euler_m
    start = partial.size - (m + 3)
    if start < 0:
        raise DomainError("n_terms too small for the requested Euler order")

    def euler(order: int) -> float:
        weights = comb(order, np.arange(order + 1)) / 2.0 ** order
        return float(np.dot(weights, partial[start:start + order + 1]))

    scale = np.exp(cfg.sigma0 * t) / half
    value = scale * euler(m)
    error = scale * abs(euler(m) - euler(m + 2))
    if error > 10.0 * cfg.tol:
        raise AccuracyError(
            f"Euler orders {m} and {m + 2} disagree by {error:.3e} at t={t:g}", value=value, error=error
        )
    return InversionResult(float(value), float(error))


def transform_P(model, kappa: float, x: float) -> Callable:
    """s ↦ P̃(x, s) = M sinh(κxsM) / (s f(s))."""

    def p_tilde(s):
        m = eval_M(model, s)
        return m * sinh_ratio(s * m, kappa, x) / s

    return p_tilde


def transform_Q(model, kappa: float, x: float) -> Callable:
    """s ↦ Q̃(x, s) = κ cosh(κxsM) / f(s), the stress transfer function."""

    def q_tilde(s):
        m = eval_M(model, s)
        return kappa * cosh_ratio(s * m, kappa, x)

    return q_tilde


def transform_sigma_H(model, kappa: float, x: float) -> Callable:
    """s ↦ σ̃_H(x, s) = Q̃(x, s) / s."""
    q_tilde = transform_Q(model, kappa, x)
    return lambda s: q_tilde(s) / s


def _config(t: float, xi_max: Optional[float], cfg: Optional[BromwichConfig]) -> BromwichConfig:
    return cfg if cfg is not None else BromwichConfig.for_time(t, xi_max)


def oracle_P(model, kappa: float, x: float, t: float, xi_max: Optional[float] = None,
             cfg: Optional[BromwichConfig] = None) -> InversionResult:
    return invert(transform_P(model, kappa, x), _config(t, xi_max, cfg), t)


def oracle_sigma_H(model, kappa: float, x: float, t: float, xi_max: Optional[float] = None,
                   cfg: Optional[BromwichConfig] = None) -> InversionResult:
    return invert(transform_sigma_H(model, kappa, x), _config(t, xi_max, cfg), t)


def oracle_kernel(model, kappa: float, kind, x: float, t: float, xi_max: Optional[float] = None) -> float:
    """Oracle value of the kernel named by `kind` ("P" or "sigma_H")."""
    if str(getattr(kind, "value", kind)) == "P":
        return oracle_P(model, kappa, x, t, xi_max).value
    return oracle_sigma_H(model, kappa, x, t, xi_max).value


def oracle_response(model, kappa: float, signal, quantity: str, x: float, t: float,
                    xi_max: Optional[float] = None, cfg: Optional[BromwichConfig] = None) -> InversionResult:
    """Inverse of F̃·P̃ (displacement) or F̃·Q̃ (stress) for a preset forcing.

    `signal` is either a forcing signal with a closed-form transform or a
    vectorised callable s ↦ F̃(s).
    """
    if callable(signal):
        f_tilde = signal
    else:
        # 延迟导入, forcing 依赖 kernels, kernels 依赖本模块
        from .forcing import laplace_transform

        f_tilde = laplace_transform(signal)
        if f_tilde is None:
            raise DomainError(f"no closed-form Laplace transform for {signal.kind} forcing")
    quantity = str(getattr(quantity, "value", quantity))
    if quantity == "displacement":
        kernel = transform_P(model, kappa, x)
    elif quantity == "stress":
        kernel = transform_Q(model, kappa, x)
    else:
        raise DomainError(f"unknown quantity '{quantity}'")
    return invert(lambda s: f_tilde(s) * kernel(s), _config(t, xi_max, cfg), t)
