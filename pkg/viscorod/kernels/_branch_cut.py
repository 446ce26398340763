"""
Branch-cut integrands and their panel quadrature.

integrand_P(q)     = Im( M sinh(κxqM) / (qM sinh(κqM) + κ cosh(κqM)) ) / q
integrand_sigma(q) = κ Im( cosh(κxqM) / (qM sinh(κqM) + κ cosh(κqM)) ) / q

with M the cut limit of the kernel's side.  The kernels are
(1/π) ∫ integrand(q) w(q, t) dq  for the time weight w.
"""
import logging
from typing import Callable, Tuple

import numpy as np
from scipy import integrate

from ..constitutive import eval_M_on_cut
from ..errors import DomainError, EvaluationError
from ..hyperbolic import cosh_ratio, sinh_ratio
from ..modes import KernelKind
from ._config import KernelSpec
from ._residues import exprel, time_factors

logger = logging.getLogger(__name__)


def _check_q(q):
    q = np.asarray(q, dtype=float)
    if np.any(~(q > 0.0)):
        raise DomainError("branch-cut integrands need q > 0")
    return q


def _finish(value, scalar: bool):
    if not np.all(np.isfinite(value)):
        raise EvaluationError("branch-cut integrand overflowed")
    return float(value) if scalar else value


def branch_cut_integrand_P(spec: KernelSpec, x: float, q):
    scalar = np.ndim(q) == 0
    q = _check_q(q)
    if x == 0.0 or spec.model.is_hookean:
        return 0.0 if scalar else np.zeros_like(q)
    m = eval_M_on_cut(spec.model, q, spec.cut_side)
    value = (m * sinh_ratio(q * m, spec.kappa, x)).imag / q
    return _finish(value, scalar)


def branch_cut_integrand_sigma(spec: KernelSpec, x: float, q):
    scalar = np.ndim(q) == 0
    q = _check_q(q)
    if spec.model.is_hookean:
        return 0.0 if scalar else np.zeros_like(q)
    m = eval_M_on_cut(spec.model, q, spec.cut_side)
    value = spec.kappa * cosh_ratio(q * m, spec.kappa, x).imag / q
    return _finish(value, scalar)


def integrand_for(spec: KernelSpec) -> Callable:
    if spec.kind is KernelKind.DISPLACEMENT_P:
        return branch_cut_integrand_P
    return branch_cut_integrand_sigma


def time_weight(t: float, order: int = 0) -> Callable:
    """e^{-qt} folded `order` times over [0, t]; order 1 is (1 - e^{-qt}) / q."""
    return lambda q: float(time_factors(-q, t, order))


def response_weight(t: float, lam: complex) -> Callable:
    """∫_0^t e^{λ(t-τ)} e^{-qτ} dτ = (e^{λt} - e^{-qt}) / (q + λ)."""
    return lambda q: complex(np.exp(lam * t) * t * exprel(-(q + lam) * t))


def cut_integral(spec: KernelSpec, x: float, t: float, weight: Callable, decays: bool, tol: float) -> Tuple[float, float]:
    """(1/π) ∫_0^∞ integrand(q) weight(q) dq, returned with an error estimate.

    `decays` says whether the weight carries e^{-qt}; otherwise the panels
    stop at the static truncation point and the algebraic tail is estimated
    from the last sample.
    """
    integrand = integrand_for(spec)
    quad = spec.quad

    def f(q: float) -> float:
        return integrand(spec, x, q) * weight(q)

    probe = np.array([q * max(1.0, 1.0 / t) if t > 0 else q for q in quad.q_split])
    bound = float(np.max(np.abs(integrand(spec, x, probe)))) if probe.size else 1.0
    q_max = quad.q_max(t, tol, bound) if decays else quad.q_max_static
    edges = quad.breakpoints(t, q_max)
    panel_tol = tol / (2.0 * max(len(edges) - 1, 1))

    total = 0.0
    error = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, abserr = integrate.quad(
            f, lo, hi, epsabs=panel_tol, epsrel=quad.rel_tol, limit=quad.panel_limit
        )
        total += value
        error += abserr

    if decays:
        error += bound * np.exp(-q_max * t) / t if t > 0.0 else abs(f(q_max)) * q_max
    else:
        # integrand * weight ~ C / q^2 beyond q_max
        error += abs(f(q_max)) * q_max
    return total / np.pi, error / np.pi


def complex_cut_integral(spec: KernelSpec, x: float, t: float, weight: Callable, tol: float) -> Tuple[complex, float]:
    """cut_integral for a complex weight without e^{-qt} decay, one QUADPACK pass per part."""
    re, re_err = cut_integral(spec, x, t, lambda q: weight(q).real, decays=False, tol=tol / 2.0)
    im, im_err = cut_integral(spec, x, t, lambda q: weight(q).imag, decays=False, tol=tol / 2.0)
    return complex(re, im), re_err + im_err
