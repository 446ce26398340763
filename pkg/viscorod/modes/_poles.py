"""
Characteristic function f(s) = sM sinh(κsM) + κ cosh(κsM) and the lift of
real frequencies w to complex poles with s M(s) = i w.
"""
import logging
from typing import Optional

import numpy as np

from ..constitutive import eval_M, eval_sM_derivative, model_limits
from ..errors import ConvergenceError, DomainError, EvaluationError, ViscorodError
from ..hyperbolic import scaled_f

logger = logging.getLogger(__name__)

NEWTON_MAX_ITER = 50
RESTARTS = 10
RESTART_SPREAD = 0.1
HOMOTOPY_STEPS = 16
_RESTART_SEED = 20240611

_MAX_EXPONENT = 700.0


def eval_f(model, kappa: float, s):
    """f(s) with the dominant exponential factored out before recombination."""
    scalar = np.ndim(s) == 0
    z = np.asarray(s, dtype=complex) * np.asarray(eval_M(model, s), dtype=complex)
    scale, g = scaled_f(z, kappa)
    if np.any(scale.real > _MAX_EXPONENT):
        raise EvaluationError("f(s) overflows: |Re(κ s M)| too large")
    value = np.exp(scale) * g
    return complex(value.reshape(())) if scalar else value


def _in_domain(s: complex) -> bool:
    return np.isfinite(s) and not (s.imag == 0.0 and s.real <= 0.0)


def _residual(model, s: complex, w: float) -> complex:
    return complex(s * eval_M(model, s)) - 1j * w


def _newton(model, w: float, s0: complex, damped: bool = False) -> complex:
    """Newton on g(s) = sM(s) - iw; damped mode halves steps until |g| drops."""
    target = 1e-10 * (1.0 + w)
    s = complex(s0)
    g = _residual(model, s, w)
    for _ in range(NEWTON_MAX_ITER):
        if abs(g) < target:
            break
        step = g / complex(eval_sM_derivative(model, s))
        lam = 1.0
        while True:
            candidate = s - lam * step
            if _in_domain(candidate):
                g_new = _residual(model, candidate, w)
                if not damped or abs(g_new) < abs(g):
                    break
            lam *= 0.5
            if lam < 1e-3:
                raise ConvergenceError(f"damped Newton stalled at w={w}", w=w)
        s, g = candidate, g_new
    else:
        raise ConvergenceError(f"Newton did not converge in {NEWTON_MAX_ITER} iterations (w={w})", w=w)

    # polish to machine precision while the residual keeps dropping
    for _ in range(5):
        candidate = s - g / complex(eval_sM_derivative(model, s))
        if not _in_domain(candidate):
            break
        g_new = _residual(model, candidate, w)
        if abs(g_new) >= abs(g):
            break
        s, g = candidate, g_new
    if s.imag <= 0.0:
        raise ConvergenceError(f"Newton left the upper half-plane (w={w}, s={s})", w=w)
    return s


def initial_guess(model, w: float) -> complex:
    limits = model_limits(model)
    if limits is not None:
        return 1j * w / limits.c_inf
    # measured scale when no analytic limit exists
    return 1j * w / complex(eval_M(model, 1j * max(w, 1.0)))


def lift_to_pole(model, kappa: float, w: float, previous: Optional[tuple] = None) -> complex:
    """Complex pole s in the upper half-plane with s M(s) = i w.

    `previous` is an optional (w_prev, s_prev) pair used for homotopy when
    both the plain and the randomly restarted damped Newton fail.
    """
    if not w > 0.0:
        raise DomainError("w must be positive")
    if model.is_hookean:
        return 1j * w

    s0 = initial_guess(model, w)
    try:
        return _newton(model, w, s0)
    except (ConvergenceError, EvaluationError) as exc:
        logger.debug(f"plain Newton failed for w={w:.6g}: {exc}")

    rng = np.random.default_rng(_RESTART_SEED)
    for _ in range(RESTARTS):
        kick = RESTART_SPREAD * (rng.standard_normal() + 1j * rng.standard_normal())
        try:
            return _newton(model, w, s0 * (1.0 + kick), damped=True)
        except (ConvergenceError, EvaluationError):
            continue

    if previous is not None:
        w_prev, s_prev = previous
        s = complex(s_prev)
        try:
            for w_j in np.linspace(w_prev, w, HOMOTOPY_STEPS + 1)[1:]:
                s = _newton(model, float(w_j), s, damped=True)
            logger.info(f"pole for w={w:.6g} recovered by homotopy from w={w_prev:.6g}")
            return s
        except ViscorodError:
            pass

    raise ConvergenceError(f"no pole found for w={w} after restarts and homotopy", w=w)
