"""
Closed-form kernels of the elastic rod (M ≡ 1): pure trigonometric series.
"""
import numpy as np

from ..constitutive import Elastic
from ..errors import DomainError
from ..modes import KernelKind, build_mode_set, frequency_ladder
from ._config import ZERO, KernelSample, KernelSpec
from ._kernel import eval_sigma_H

DEFAULT_TERMS = 10_000


def _series(kappa: float, n_terms: int, x: float, t: float, stress: bool):
    if n_terms < 1:
        raise DomainError("n_terms must be at least 1")
    ladder = frequency_ladder(kappa, n_terms)
    w, denom = ladder.w, ladder.denom
    if stress:
        terms = -2.0 * kappa * np.cos(kappa * w * x) * np.cos(w * t) / (w * denom)
        envelope = 2.0 * kappa / np.abs(w * denom)
    else:
        terms = 2.0 * np.sin(kappa * w * x) * np.sin(w * t) / (w * denom)
        envelope = 2.0 / np.abs(w * denom)
    n = ladder.index.astype(float)
    # terms are bounded by k/n²; the tail beyond n_terms is at most k/n_terms
    k = float(np.max(envelope * n * n))
    return float(np.sum(terms)), k / n_terms, float(np.sum(envelope))


def elastic_P(kappa: float, x: float, t: float, n_terms: int = DEFAULT_TERMS) -> KernelSample:
    """2 Σ sin(κ w_n x) sin(w_n t) / (w_n D_n)."""
    if t < 0.0 or x == 0.0:
        return ZERO
    value, tail, _ = _series(kappa, n_terms, x, t, stress=False)
    return KernelSample(value, tail)


def elastic_sigma_H(
    kappa: float, x: float, t: float, n_terms: int = DEFAULT_TERMS, include_step: bool = True
) -> KernelSample:
    """H(t) − 2κ Σ cos(κ w_n x) cos(w_n t) / (w_n D_n).

    `include_step=False` returns the bare series; the step is then missing
    and σ(x, 0) comes out near −1 instead of 0.
    """
    if t < 0.0:
        return ZERO
    value, tail, _ = _series(kappa, n_terms, x, t, stress=True)
    if include_step:
        value += 1.0
    return KernelSample(value, tail)


def elastic_sigma_bound(kappa: float, n_terms: int = DEFAULT_TERMS) -> float:
    """2κ Σ 1 / |w_n D_n|, a bound on the bare stress series for every (x, t)."""
    return _series(kappa, n_terms, 0.0, 0.0, stress=True)[2]


def elastic_step_discrepancy(kappa: float, x: float, t: float, n_terms: int = DEFAULT_TERMS) -> float:
    """General-pipeline σ_H for M ≡ 1 minus the bare elastic series."""
    spec = KernelSpec.for_modes(KernelKind.STRESS_SIGMA_H, build_mode_set(Elastic(), kappa, n_terms))
    general = eval_sigma_H(spec, x, t).value
    bare = elastic_sigma_H(kappa, x, t, n_terms, include_step=False).value
    return general - bare
