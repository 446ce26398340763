"""
Real frequencies w_n solving tan(κw) = κ/w.

Root n (1-based) sits on branch m = n - 1:  κ w_n = mπ + δ_n  with
δ_n ∈ (0, π/2).  Solving for δ instead of w keeps the tangent argument
small, so the residual stays at machine level even for n ~ 10^4.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from ..errors import BracketError, ConvergenceError, DomainError

RESIDUAL_TOL = 1e-12


def _h(delta: float, kappa: float, m: int) -> float:
    # κ² cos δ − (mπ + δ) sin δ, zero iff tan δ = κ² / (mπ + δ)
    return kappa * kappa * np.cos(delta) - (m * np.pi + delta) * np.sin(delta)


def _dh(delta: float, kappa: float, m: int) -> float:
    return -((1.0 + kappa * kappa) * np.sin(delta) + (m * np.pi + delta) * np.cos(delta))


def _solve_branch(kappa: float, m: int) -> float:
    lo, hi = 0.0, 0.5 * np.pi
    h_lo, h_hi = _h(lo, kappa, m), _h(hi, kappa, m)
    if h_lo * h_hi > 0.0:
        raise BracketError(f"no sign change of tan(κw) - κ/w on branch {m} (κ={kappa})")
    delta = brentq(_h, lo, hi, args=(kappa, m), xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)
    # safeguarded Newton polish: keep a step only if it stays in the bracket and helps
    for _ in range(3):
        value = _h(delta, kappa, m)
        if value == 0.0:
            break
        candidate = delta - value / _dh(delta, kappa, m)
        if not lo < candidate < hi or abs(_h(candidate, kappa, m)) >= abs(value):
            break
        delta = candidate
    return delta


@dataclass(frozen=True)
class FrequencyLadder:
    """Frequencies together with their reduced phases."""

    kappa: float
    branch: np.ndarray  # m = n - 1
    delta: np.ndarray

    @property
    def n_max(self) -> int:
        return int(self.branch.size)

    @property
    def index(self) -> np.ndarray:
        return self.branch + 1

    @property
    def w(self) -> np.ndarray:
        return (self.branch * np.pi + self.delta) / self.kappa

    @property
    def parity(self) -> np.ndarray:
        return np.where(self.branch % 2 == 0, 1.0, -1.0)

    @property
    def sin_kw(self) -> np.ndarray:
        return self.parity * np.sin(self.delta)

    @property
    def cos_kw(self) -> np.ndarray:
        return self.parity * np.cos(self.delta)

    @property
    def denom(self) -> np.ndarray:
        """(1 + κ²) sin(κw) + κw cos(κw)."""
        k2 = self.kappa * self.kappa
        return self.parity * (
            (1.0 + k2) * np.sin(self.delta) + (self.branch * np.pi + self.delta) * np.cos(self.delta)
        )

    @property
    def residual(self) -> np.ndarray:
        """|tan(κw) − κ/w| / (1 + κ/w)."""
        ratio = self.kappa * self.kappa / (self.branch * np.pi + self.delta)
        return np.abs(np.tan(self.delta) - ratio) / (1.0 + ratio)


@lru_cache(maxsize=32)
def frequency_ladder(kappa: float, n_max: int) -> FrequencyLadder:
    """Cached ladder of the first n_max frequencies."""
    if not kappa > 0.0:
        raise DomainError("kappa must be positive")
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    branch = np.arange(n_max)
    delta = np.array([_solve_branch(float(kappa), int(m)) for m in branch])
    branch.setflags(write=False)
    delta.setflags(write=False)
    ladder = FrequencyLadder(kappa=float(kappa), branch=branch, delta=delta)
    worst = float(ladder.residual.max())
    if worst >= RESIDUAL_TOL:
        raise ConvergenceError(f"frequency residual {worst:.3e} above {RESIDUAL_TOL:g}")
    return ladder


def find_frequencies(kappa: float, n_max: int) -> np.ndarray:
    """The n_max smallest positive roots of tan(κw) = κ/w, increasing."""
    return frequency_ladder(kappa, n_max).w.copy()
