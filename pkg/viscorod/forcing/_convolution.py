"""
Responses to a general tip force: u = F ∗ P and σ = d/dt (F ∗ σ_H).

Piecewise-linear and sinusoidal loads reduce to a handful of kernel
primitives; only the power step is integrated by quadrature.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Tuple

from scipy.special import gamma, roots_jacobi

from ..errors import DomainError, SampleFlag
from ..kernels import (
    KernelKind,
    KernelSample,
    KernelSpec,
    eval_exponential_response,
    eval_kernel,
    eval_P,
    eval_primitive,
    eval_sigma_H,
)
from ._signals import Heaviside, Impulse, PowerStep, Sinusoid, Tabulated, eval_F

logger = logging.getLogger(__name__)

REL_TOL = 1e-4
START_PANELS = 16
MAX_PANELS = 4096
JACOBI_NODES = 16
SINGULAR_PANEL_FRACTION = 0.125
STRESS_STEP = 1e-3


@lru_cache(maxsize=None)
def _warn_derived_stress() -> None:
    logger.warning(
        "stress under non-step forcing is derived from F * sigma_H; "
        "for impulse and power-step loads its accuracy is limited by the difference step"
    )


class _KernelMemo:
    """Kernel samples at t − τ on dyadic refinements of [a, b]."""

    def __init__(self, kernel: Callable[[float], KernelSample], t: float, a: float, b: float):
        self._kernel = kernel
        self._t = t
        self._a = a
        self._b = b
        self._cache: Dict[Fraction, KernelSample] = {}
        self.flags = set()

    def __call__(self, frac: Fraction) -> KernelSample:
        sample = self._cache.get(frac)
        if sample is None:
            tau = self._a + float(frac) * (self._b - self._a)
            sample = self._kernel(self._t - tau)
            self._cache[frac] = sample
            self.flags |= sample.flags
        return sample


def _simpson(memo: _KernelMemo, force: Callable[[float], float], a: float, b: float, n: int) -> Tuple[float, float]:
    """Composite Simpson of F K, and the same rule applied to |F| · error(K)."""
    h = (b - a) / n
    total, spread = 0.0, 0.0
    for j in range(n + 1):
        weight = 1.0 if j in (0, n) else (4.0 if j % 2 else 2.0)
        frac = Fraction(j, n)
        f = force(a + float(frac) * (b - a))
        sample = memo(frac)
        total += weight * f * sample.value
        spread += weight * abs(f) * sample.error
    return total * h / 3.0, spread * h / 3.0


def _refine(kernel, force, t: float, a: float, b: float, tol: float):
    """Composite Simpson on [a, b] with halving until the relative change is below REL_TOL."""
    memo = _KernelMemo(kernel, t, a, b)
    n = START_PANELS
    fine, spread = _simpson(memo, force, a, b, n)
    coarse = fine
    converged = False
    while n < MAX_PANELS:
        n *= 2
        coarse = fine
        fine, spread = _simpson(memo, force, a, b, n)
        if abs(fine - coarse) <= max(REL_TOL * abs(fine), tol):
            converged = True
            break
    value = fine + (fine - coarse) / 15.0
    error = abs(fine - coarse) / 15.0 + spread
    flags = set(memo.flags)
    if not converged:
        flags.add(SampleFlag.ACCURACY)
    return value, error, flags


def _gauss_jacobi_panel(kernel, alpha: float, t: float, h: float):
    """∫_0^h τ^{α−1}/Γ(α) K(t − τ) dτ with the weight (1 + ξ)^{α−1} built in."""
    nodes, weights = roots_jacobi(JACOBI_NODES, 0.0, alpha - 1.0)
    total, error, flags = 0.0, 0.0, set()
    for xi, wt in zip(nodes, weights):
        sample = kernel(t - h * (1.0 + xi) / 2.0)
        total += wt * sample.value
        error += wt * sample.error
        flags |= sample.flags
    factor = (h / 2.0) ** alpha / gamma(alpha)
    return factor * total, factor * error, flags


def convolve(kernel: Callable[[float], KernelSample], signal, t: float, tol: float) -> KernelSample:
    """∫_0^t F(τ) K(t − τ) dτ for an undelayed, locally integrable F."""
    if t <= 0.0:
        return KernelSample(0.0)

    def force(tau: float) -> float:
        return eval_F(signal, tau)

    if isinstance(signal, PowerStep):
        h = SINGULAR_PANEL_FRACTION * t
        head, head_err, flags = _gauss_jacobi_panel(kernel, signal.alpha, t, h)
        body, body_err, body_flags = _refine(kernel, force, t, h, t, tol)
        return KernelSample(head + body, head_err + body_err, frozenset(flags | body_flags))
    value, error, flags = _refine(kernel, force, t, 0.0, t, tol)
    return KernelSample(value, error, frozenset(flags))


def _combine(spec: KernelSpec, parts: List[Tuple[float, KernelSample]], extra=frozenset()) -> KernelSample:
    """Σ c_i K_i with summed error budgets."""
    value = sum(c * sample.value for c, sample in parts)
    error = sum(abs(c) * sample.error for c, sample in parts)
    flags = set(extra)
    for _, sample in parts:
        flags |= sample.flags
    flags.discard(SampleFlag.ACCURACY)
    if error > spec.tol:
        flags.add(SampleFlag.ACCURACY)
    return KernelSample(float(value), float(error), frozenset(flags))


def _piecewise_linear(spec: KernelSpec, table: Tabulated, x: float, t: float, order: int) -> List[Tuple[float, KernelSample]]:
    """Terms of F ∗ K (order 1) or d/dt (F ∗ K) (order 0) for a piecewise-linear F.

    With K_j the j-th time primitive of the kernel,
    the terms are F(0) K_j(t) and m_i [K_{j+1}(t − t_i) − K_{j+1}(t − min(t_{i+1}, t))]
    per segment of slope m_i, with j = order.
    The last value is held beyond the table, so segments past it carry no slope.
    Each primitive gets tol divided by Σ|c_i|, so the sum stays within tol.
    """
    terms = [(table.values[0], t, order)]
    points = list(zip(table.times, table.values))
    for (t0, f0), (t1, f1) in zip(points, points[1:]):
        if t0 >= t:
            break
        slope = (f1 - f0) / (t1 - t0)
        if slope == 0.0:
            continue
        terms.append((slope, t - t0, order + 1))
        terms.append((-slope, t - min(t1, t), order + 1))
    weight = sum(abs(c) for c, _, _ in terms)
    part_spec = spec.with_tol(spec.tol / weight) if weight > 1.0 else spec
    return [(c, eval_primitive(part_spec, x, time, j)) for c, time, j in terms]


def _sinusoid(spec: KernelSpec, signal: Sinusoid, x: float, t: float, derivative: bool) -> KernelSample:
    """A sin(ω·) ∗ K = A Im G(iω, t); its time derivative is A ω Re G(iω, t)."""
    scale = signal.amplitude * signal.omega if derivative else signal.amplitude
    inner = spec.with_tol(spec.tol / abs(scale)) if abs(scale) > 1.0 else spec
    response = eval_exponential_response(inner, x, t, 1j * signal.omega)
    value = response.value.real if derivative else response.value.imag
    error = abs(scale) * response.error
    flags = set(response.flags)
    flags.discard(SampleFlag.ACCURACY)
    if error > spec.tol:
        flags.add(SampleFlag.ACCURACY)
    return KernelSample(float(scale * value), float(error), frozenset(flags))


def compose_u(spec: KernelSpec, signal, x: float, t: float) -> KernelSample:
    """Displacement u(x, t) = (F ∗ P)(x, t)."""
    if spec.kind is not KernelKind.DISPLACEMENT_P:
        raise DomainError("compose_u needs a DisplacementP kernel spec")
    tau = t - signal.delay
    if tau <= 0.0 or x == 0.0:
        return KernelSample(0.0)
    if isinstance(signal, Impulse):
        return eval_P(spec, x, tau)
    if isinstance(signal, Heaviside):
        return eval_primitive(spec, x, tau, 1)
    if isinstance(signal, Tabulated):
        return _combine(spec, _piecewise_linear(spec, signal, x, tau, 1))
    if isinstance(signal, Sinusoid):
        return _sinusoid(spec, signal, x, tau, derivative=False)
    return convolve(lambda s: eval_P(spec, x, s), signal.undelayed(), tau, spec.tol)


def compose_sigma(spec: KernelSpec, signal, x: float, t: float) -> KernelSample:
    """Stress σ(x, t); exact for step loads, the time derivative of F ∗ σ_H otherwise.

    Piecewise-linear and sinusoidal loads differentiate F ∗ σ_H in closed
    form; the impulse and the power step use a central difference.
    """
    if spec.kind is not KernelKind.STRESS_SIGMA_H:
        raise DomainError("compose_sigma needs a StressSigmaH kernel spec")
    tau = t - signal.delay
    if isinstance(signal, Heaviside):
        return eval_sigma_H(spec, x, tau)
    if tau < 0.0:
        return KernelSample(0.0)
    _warn_derived_stress()
    derived = frozenset({SampleFlag.DERIVED_STRESS})

    if isinstance(signal, Tabulated):
        return _combine(spec, _piecewise_linear(spec, signal, x, tau, 0), derived)
    if isinstance(signal, Sinusoid):
        sample = _sinusoid(spec, signal, x, tau, derivative=True)
        return KernelSample(sample.value, sample.error, sample.flags | derived)

    base = signal.undelayed()
    if isinstance(signal, Impulse):
        def integral(time: float) -> KernelSample:
            return eval_sigma_H(spec, x, time)
    else:
        def integral(time: float) -> KernelSample:
            return convolve(lambda s: eval_kernel(spec, x, s), base, time, spec.tol)

    h = STRESS_STEP * max(tau, 1.0)
    upper = integral(tau + h)
    if tau - h >= 0.0:
        lower = integral(tau - h)
        value = (upper.value - lower.value) / (2.0 * h)
        error = (upper.error + lower.error) / (2.0 * h)
    else:
        lower = integral(tau)
        value = (upper.value - lower.value) / h
        error = (upper.error + lower.error) / h
    flags = upper.flags | lower.flags | derived
    return KernelSample(value, error, frozenset(flags))
