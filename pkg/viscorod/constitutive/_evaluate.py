"""
Evaluation of M(s), its cut limits and d(sM)/ds.

Scalars in, scalars out; numpy arrays in, arrays out.
"""
from enum import Enum
from typing import Union

import numpy as np

from ..errors import DomainError, EvaluationError, UnsafeModelError
from ._models import FractionalZener, HilferFluid, PowerLaw

ComplexS = complex

# Richardson agreement demanded of the finite-difference derivative
_FD_CHECK_RTOL = 1e-6


class CutSide(str, Enum):
    """Side of the negative real axis a cut limit is taken from."""
    UPPER = "upper"  # s = q e^{+iπ}
    LOWER = "lower"  # s = q e^{-iπ}

    @property
    def phase(self) -> float:
        return np.pi if self is CutSide.UPPER else -np.pi

    def flipped(self) -> "CutSide":
        return CutSide.LOWER if self is CutSide.UPPER else CutSide.UPPER


def _unwrap(value, scalar: bool):
    if scalar:
        return complex(value.reshape(()))
    return value


def _branch_sqrt(m2: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(m2)):
        raise EvaluationError("M(s)^2 overflowed or is undefined at some sample points")
    return np.sqrt(m2)


def check_in_domain(s) -> np.ndarray:
    """Return s as a complex array, raising DomainError on the closed negative axis."""
    arr = np.asarray(s, dtype=complex)
    on_cut = (arr.imag == 0.0) & (arr.real <= 0.0)
    if np.any(on_cut):
        raise DomainError(
            "s must lie in the cut plane C \\ (-inf, 0]; use eval_M_on_cut for cut limits"
        )
    return arr


def m_from_log(model, log_s) -> np.ndarray:
    """M evaluated from log(s), principal square root of the quotient."""
    if model.is_hookean:
        return np.ones_like(np.asarray(log_s), dtype=complex)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return _branch_sqrt(model.m_squared(np.asarray(log_s, dtype=complex)))


def eval_M(model, s: Union[ComplexS, np.ndarray]):
    """M(s) on V = C \\ (-inf, 0]."""
    scalar = np.ndim(s) == 0
    arr = check_in_domain(s)
    return _unwrap(m_from_log(model, np.log(arr)), scalar)


def eval_M_on_cut(model, q, side: Union[CutSide, str]):
    """Limit of M onto the negative real axis at -q from the given side."""
    side = CutSide(side)
    scalar = np.ndim(q) == 0
    q_arr = np.asarray(q, dtype=float)
    if np.any(~(q_arr > 0.0)):
        raise DomainError("cut-limit evaluation needs q > 0")
    log_s = np.log(q_arr) + 1j * side.phase
    return _unwrap(m_from_log(model, log_s), scalar)


def _analytic_log_derivative(model, s: np.ndarray) -> np.ndarray:
    """s * d/ds ln M^2 for the models with closed forms."""
    log_s = np.log(s)
    if isinstance(model, FractionalZener):
        z = np.exp(model.alpha * log_s)
        return model.alpha * (model.a * z / (1.0 + model.a * z) - model.b * z / (1.0 + model.b * z))
    if isinstance(model, HilferFluid):
        z = np.exp(model.alpha * log_s)
        num = model.alpha * model.a * z / (1.0 + model.a * z)
        terms = [
            (model.beta0, model.b0),
            (model.beta1, model.b1),
            (model.beta2, model.b2),
        ]
        den = sum(b * np.exp(beta * log_s) for beta, b in terms)
        den_d = sum(beta * b * np.exp(beta * log_s) for beta, b in terms)
        return num - den_d / den
    raise TypeError(f"no closed-form derivative for {type(model).__name__}")


def _sm(model, s):
    return s * m_from_log(model, np.log(s))


def _central_difference(model, s: complex, h: float) -> complex:
    return complex((_sm(model, s + h) - _sm(model, s - h)) / (2.0 * h))


def _fd_derivative(model, s: complex) -> complex:
    h = max(1e-6, 1e-8 * abs(s))
    if s.imag == 0.0:
        # s ± h must stay on the positive axis
        h = min(h, s.real / 2.0)
    coarse = _central_difference(model, s, h)
    fine = _central_difference(model, s, h / 2.0)
    extrapolated = (4.0 * fine - coarse) / 3.0
    if not np.isfinite(extrapolated):
        raise EvaluationError(f"d(sM)/ds is not finite at s={s}")
    if abs(extrapolated - fine) > _FD_CHECK_RTOL * max(abs(extrapolated), 1e-300):
        raise EvaluationError(
            f"finite-difference check failed for d(sM)/ds at s={s}: "
            f"|D(h/2) - R| = {abs(extrapolated - fine):.3e}"
        )
    return extrapolated


def eval_sM_derivative(model, s: Union[ComplexS, np.ndarray]):
    """d(sM(s))/ds.  Analytic for Elastic/Zener/Hilfer; Richardson-checked
    central differences for PowerLaw."""
    scalar = np.ndim(s) == 0
    arr = check_in_domain(s)
    if model.is_hookean:
        return _unwrap(np.ones_like(arr), scalar)
    if isinstance(model, PowerLaw):
        out = np.array([_fd_derivative(model, complex(v)) for v in arr.ravel()]).reshape(arr.shape)
        return _unwrap(out, scalar)
    with np.errstate(over="ignore", invalid="ignore"):
        m = _branch_sqrt(model.m_squared(np.log(arr)))
        out = m * (1.0 + 0.5 * _analytic_log_derivative(model, arr))
    if not np.all(np.isfinite(out)):
        raise EvaluationError("d(sM)/ds overflowed")
    return _unwrap(out, scalar)


def require_safe(model, allow_unsafe: bool = False) -> None:
    """Gate models whose small-s behaviour breaks the kernel theory."""
    if isinstance(model, HilferFluid) and not allow_unsafe:
        raise UnsafeModelError(
            "HilferFluid has M(s) → ∞ as s → 0 and is excluded from the mode/kernel "
            "pipeline; pass the unsafe-model flag to override"
        )


__all__ = [
    "ComplexS",
    "CutSide",
    "check_in_domain",
    "eval_M",
    "eval_M_on_cut",
    "eval_sM_derivative",
    "m_from_log",
    "require_safe",
]
