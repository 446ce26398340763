"""
Solution kernels P(x, t) and σ_H(x, t):
branch-cut integral + truncated residue series, with an error budget split
evenly between quadrature and the residue tail.  The mode set grows until
the tail fits its half of the budget.
"""
import logging
from dataclasses import dataclass
from typing import FrozenSet, Sequence, Tuple

import numpy as np

from ..errors import AccuracyError, DomainError, SampleFlag
from ..modes import KernelKind, ModeSet
from ..oracle import oracle_kernel
from ._branch_cut import complex_cut_integral, cut_integral, response_weight, time_weight
from ._config import ZERO, KernelSample, KernelSpec
from ._residues import exponential_residue_sum, exprel, residue_sum

logger = logging.getLogger(__name__)


def _check_x(x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")


def _flags(modes: ModeSet, error: float, tol: float) -> FrozenSet[SampleFlag]:
    flags = set()
    if modes.unresolved:
        flags.add(SampleFlag.UNRESOLVED_MODES)
    if error > tol:
        flags.add(SampleFlag.ACCURACY)
    return frozenset(flags)


def _finish(spec: KernelSpec, modes: ModeSet, value: float, error: float, strict: bool) -> KernelSample:
    if strict and error > spec.tol:
        raise AccuracyError(f"error estimate {error:.3e} exceeds tol {spec.tol:.3e}", value=value, error=error)
    return KernelSample(float(value), float(error), _flags(modes, error, spec.tol))


def _cut(spec: KernelSpec, x: float, t: float, order: int) -> Tuple[float, float]:
    if spec.model.is_hookean:
        return 0.0, 0.0
    return cut_integral(spec, x, t, time_weight(t, order), decays=order == 0, tol=spec.tol / 2.0)


def _base(spec: KernelSpec, t: float, order: int) -> float:
    """The H(t) part of σ_H folded `order` times."""
    if spec.kind is not KernelKind.STRESS_SIGMA_H:
        return 0.0
    return t ** order / (1.0, 1.0, 2.0)[order]


def eval_primitive(spec: KernelSpec, x: float, t: float, order: int = 0, strict: bool = False) -> KernelSample:
    """The kernel (order 0) or its first or second time primitive ∫_0^t, ∫_0^t∫_0^τ.

    Both kernels start from rest: every primitive vanishes at t <= 0, and so
    does P at the fixed end.
    """
    _check_x(x)
    if order not in (0, 1, 2):
        raise DomainError(f"primitive order must be 0, 1 or 2, got {order}")
    if t <= 0.0 or (x == 0.0 and spec.kind is KernelKind.DISPLACEMENT_P):
        return ZERO
    modes = spec.modes_for(t, order)
    cut, cut_err = _cut(spec, x, t, order)
    series = residue_sum(spec, x, t, modes, order)
    error = cut_err + modes.tail_bound(spec.kind, t, order)
    return _finish(spec, modes, _base(spec, t, order) + cut + series, error, strict)


def eval_P(spec: KernelSpec, x: float, t: float, strict: bool = False) -> KernelSample:
    """Impulse-response displacement kernel P(x, t)."""
    if spec.kind is not KernelKind.DISPLACEMENT_P:
        raise DomainError("eval_P needs a DisplacementP kernel spec")
    return eval_primitive(spec, x, t, 0, strict)


def eval_sigma_H(spec: KernelSpec, x: float, t: float, strict: bool = False) -> KernelSample:
    """Step-load stress kernel σ_H(x, t) = H(t) + cut term + residue series."""
    if spec.kind is not KernelKind.STRESS_SIGMA_H:
        raise DomainError("eval_sigma_H needs a StressSigmaH kernel spec")
    return eval_primitive(spec, x, t, 0, strict)


def eval_kernel(spec: KernelSpec, x: float, t: float, strict: bool = False) -> KernelSample:
    if spec.kind is KernelKind.DISPLACEMENT_P:
        return eval_P(spec, x, t, strict)
    return eval_sigma_H(spec, x, t, strict)


def eval_step_displacement(spec: KernelSpec, x: float, t: float, strict: bool = False) -> KernelSample:
    """U_H(x, t) = ∫_0^t P(x, τ) dτ, the displacement under a unit step load."""
    if spec.kind is not KernelKind.DISPLACEMENT_P:
        raise DomainError("step displacement needs a DisplacementP kernel spec")
    return eval_primitive(spec, x, t, 1, strict)


@dataclass(frozen=True)
class ExponentialResponse:
    """G(λ, t) = ∫_0^t e^{λ(t−τ)} K(τ) dτ with its error estimate."""

    value: complex
    error: float
    flags: FrozenSet[SampleFlag] = frozenset()


def _exponential_tail(modes: ModeSet, kind: KernelKind, t: float, lam: complex) -> float:
    fit = modes.tail.get(kind)
    if fit is None:
        return 0.0
    # |e^{st} − e^{λt}| / |s − λ| <= t max(1, e^{ξ t}) for Re λ = 0
    crude = t * max(1.0, float(np.exp(fit.a_tail * t))) * fit.bound(modes.n_max, 0.0, 0)
    if fit.s_abs < 2.0 * abs(lam):
        return crude
    # |s − λ| >= |s| / 2 beyond the truncation
    return min(crude, 2.0 * fit.bound(modes.n_max, t, 1))


def eval_exponential_response(spec: KernelSpec, x: float, t: float, lam: complex) -> ExponentialResponse:
    """Response to the load e^{λ t} switched on at t = 0, for purely imaginary λ."""
    _check_x(x)
    if lam.real != 0.0:
        raise DomainError(f"exponential loads need a purely imaginary rate, got {lam}")
    if t <= 0.0 or (x == 0.0 and spec.kind is KernelKind.DISPLACEMENT_P):
        return ExponentialResponse(0.0j, 0.0)
    modes = spec.modes.sufficient(spec.kind, t, spec.tol / 4.0, spec.max_modes, order=1)
    if spec.model.is_hookean:
        cut, cut_err = 0.0j, 0.0
    else:
        cut, cut_err = complex_cut_integral(spec, x, t, response_weight(t, lam), tol=spec.tol / 2.0)
    value = cut + exponential_residue_sum(spec, x, t, lam, modes)
    if spec.kind is KernelKind.STRESS_SIGMA_H:
        # ∫_0^t e^{λ(t−τ)} dτ
        value += t * complex(exprel(lam * t))
    error = cut_err + _exponential_tail(modes, spec.kind, t, lam)
    return ExponentialResponse(complex(value), float(error), _flags(modes, error, spec.tol))


@dataclass(frozen=True)
class CutCalibration:
    spec: KernelSpec
    skipped: bool
    deviation_kept: float = 0.0
    deviation_flipped: float = 0.0
    probe_x: Tuple[float, ...] = ()
    t: float = 0.0

    def render(self) -> str:
        kind = self.spec.kind.value
        if self.skipped:
            return f"{kind}: cut side {self.spec.cut_side.value} (calibration skipped: branch-cut term vanishes)"
        return (
            f"{kind}: cut side {self.spec.cut_side.value} at t={self.t:g}, probes x={list(self.probe_x)}; "
            f"max deviation chosen={self.deviation_kept:.3e}, other side={self.deviation_flipped:.3e}"
        )


def calibrate_cut_side(
    spec: KernelSpec,
    probe_x: Sequence[float] = (0.25, 0.5, 1.0),
    t: float = 0.1,
) -> CutCalibration:
    """Pick the cut side whose kernel matches the Bromwich oracle at time t."""
    if spec.model.is_hookean:
        return CutCalibration(spec=spec, skipped=True)

    modes = spec.modes_for(t)
    kept, flipped = [], []
    cut_size = 0.0
    for x in probe_x:
        cut, _ = _cut(spec, x, t, 0)
        rest = _base(spec, t, 0) + residue_sum(spec, x, t, modes)
        reference = oracle_kernel(spec.model, spec.kappa, spec.kind, x, t, xi_max=spec.modes.xi_max)
        kept.append(abs(rest + cut - reference))
        flipped.append(abs(rest - cut - reference))
        cut_size = max(cut_size, abs(cut))

    if cut_size < spec.tol:
        logger.info(f"cut-side calibration for {spec.kind.value} skipped: branch-cut term below tol")
        return CutCalibration(spec=spec, skipped=True)

    dev_kept, dev_flipped = max(kept), max(flipped)
    if dev_flipped < dev_kept:
        result = CutCalibration(
            spec=spec.with_side(spec.cut_side.flipped()), skipped=False,
            deviation_kept=dev_flipped, deviation_flipped=dev_kept, probe_x=tuple(probe_x), t=t,
        )
    else:
        result = CutCalibration(
            spec=spec, skipped=False, deviation_kept=dev_kept, deviation_flipped=dev_flipped,
            probe_x=tuple(probe_x), t=t,
        )
    logger.info(f"cut-side calibration: {result.render()}")
    return result


def calibrate_cut_sides(*specs: KernelSpec, probe_x=(0.25, 0.5, 1.0), t: float = 0.1) -> Tuple[CutCalibration, ...]:
    return tuple(calibrate_cut_side(spec, probe_x, t) for spec in specs)
