"""
Residue series in simplified form.

Res_P(s_n) = i w_n sin(κ w_n x) / D_n · e^{s_n t} / (s_n² (sM)'(s_n))
Res_σ(s_n) = −i κ cos(κ w_n x) / D_n · e^{s_n t} / (s_n (sM)'(s_n))

with D_n = (1 + κ²) sin(κ w_n) + κ w_n cos(κ w_n).  Conjugate poles are
never formed for real time weights: the series is 2 Σ Re(Res).
"""
from typing import Optional

import numpy as np

from ..errors import DomainError
from ..modes import KernelKind, ModeSet

SERIES_SWITCH = 1e-3


def residue_coefficients(modes: ModeSet, kind: KernelKind, x: float) -> np.ndarray:
    """Residues with the e^{s_n t} factor removed."""
    kappa = modes.kappa
    w, s, dsm, denom = modes.w, modes.s, modes.dsm, modes.denom
    if KernelKind(kind) is KernelKind.DISPLACEMENT_P:
        return 1j * w * np.sin(kappa * w * x) / (denom * s * s * dsm)
    return -1j * kappa * np.cos(kappa * w * x) / (denom * s * dsm)


def exprel(z: np.ndarray) -> np.ndarray:
    """(e^z − 1) / z."""
    small = np.abs(z) < SERIES_SWITCH
    safe = np.where(small, 1.0, z)
    return np.where(small, 1.0 + z / 2.0 + z * z / 6.0, np.expm1(safe) / safe)


def exprel2(z: np.ndarray) -> np.ndarray:
    """(e^z − 1 − z) / z²."""
    small = np.abs(z) < SERIES_SWITCH
    safe = np.where(small, 1.0, z)
    return np.where(small, 0.5 + z / 6.0 + z * z / 24.0, (np.expm1(safe) - safe) / (safe * safe))


def time_factors(s: np.ndarray, t: float, order: int) -> np.ndarray:
    """∫ of e^{sτ} folded `order` times over [0, t]."""
    z = s * t
    if order == 0:
        return np.exp(z)
    if order == 1:
        return t * exprel(z)
    if order == 2:
        return t * t * exprel2(z)
    raise DomainError(f"primitive order must be 0, 1 or 2, got {order}")


def residue_terms(spec, x: float, t: float, modes: Optional[ModeSet] = None) -> np.ndarray:
    """Per-mode residues c_n e^{s_n t} of the kernel selected by `spec.kind`."""
    modes = spec.modes if modes is None else modes
    return residue_coefficients(modes, spec.kind, x) * np.exp(modes.s * t)


def residue_sum(spec, x: float, t: float, modes: Optional[ModeSet] = None, order: int = 0) -> float:
    """2 Σ Re(c_n ∫…∫ e^{s_n τ}): the residue part of the kernel or its time primitives."""
    modes = spec.modes if modes is None else modes
    c = residue_coefficients(modes, spec.kind, x)
    return float(2.0 * np.sum((c * time_factors(modes.s, t, order)).real))


def exponential_residue_sum(spec, x: float, t: float, lam: complex, modes: Optional[ModeSet] = None) -> complex:
    """Residue part of ∫_0^t e^{λ(t−τ)} K(τ) dτ, both poles of each pair summed."""
    modes = spec.modes if modes is None else modes
    c = residue_coefficients(modes, spec.kind, x)
    total = 0.0 + 0.0j
    for coeff, pole in ((c, modes.s), (np.conj(c), np.conj(modes.s))):
        # (e^{s t} − e^{λ t}) / (s − λ)
        total += np.sum(coeff * np.exp(lam * t) * t * exprel((pole - lam) * t))
    return complex(total)
