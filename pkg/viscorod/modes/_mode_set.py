"""
Mode sets: frequencies, poles and the per-mode data of both residue series.
"""
import csv
import io
import logging
import threading
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy import integrate

from ..constitutive import eval_sM_derivative, model_limits, require_safe
from ..errors import ConvergenceError, DomainError, EvaluationError
from ..util import fmt_float
from ._frequencies import frequency_ladder
from ._poles import eval_f, lift_to_pole

logger = logging.getLogger(__name__)

DEFAULT_N_MAX = 64
MAX_MODES = 4096
SIMPLE_POLE_MIN_DENOM = 1e-6
POLE_RESIDUAL_TOL = 1e-9
TAIL_FIT_FIRST_INDEX = 5
# extrapolated exponents use a slightly flatter power law than the last octave shows
GROWTH_SHRINK = 0.9

MODE_CSV_HEADER = (
    "n", "w", "re_s", "im_s", "re_dsm", "im_dsm", "denom", "residual",
    "w_ratio", "zeta_ratio", "resolved",
)


class KernelKind(str, Enum):
    """The two solution kernels."""
    DISPLACEMENT_P = "P"
    STRESS_SIGMA_H = "sigma_H"


@dataclass(frozen=True)
class Mode:
    index: int
    w: float
    s: complex
    dsm: complex
    denom: float
    residual: float
    resolved: bool = True
    note: str = ""

    @property
    def xi(self) -> float:
        return self.s.real

    @property
    def zeta(self) -> float:
        return self.s.imag


@dataclass(frozen=True)
class TailFit:
    """|residue_n(x, t)| <= K e^{a t} / n^2 for the fitted range.

    Beyond the last computed mode N the exponents are extrapolated as
    ξ_n <= a_tail (n/N)^growth and the pole moduli as |s_n| >= s_abs n/N.
    """

    K: float
    a: float
    a_tail: float
    first_index: int
    growth: float = 0.0
    s_abs: float = 0.0

    def projected(self, scale: float) -> "TailFit":
        """The same law seen from a truncation order `scale` times larger."""
        a_tail = self.a_tail * scale ** self.growth if self.growth > 0.0 else self.a_tail
        return replace(self, a_tail=a_tail, s_abs=self.s_abs * scale)

    def bound(self, n_max: int, t: float, order: int = 0) -> float:
        """Two-sided residue tail beyond n_max of the `order`-fold time primitive."""
        t = max(t, 0.0)
        rate = self.a_tail * t
        scale = 2.0 * self.K / n_max
        if order == 0:
            return scale * _decay_integral(2, rate, self.growth)
        if self.s_abs <= 0.0:
            return float("inf")
        if order == 1:
            # |e^{s t} - 1| / |s| <= (1 + e^{ξ t}) / |s|
            return scale / self.s_abs * (0.5 + _decay_integral(3, rate, self.growth))
        if order == 2:
            # |e^{s t} - 1 - s t| / |s|^2 <= (1 + e^{ξ t}) / |s|^2 + t / |s|
            return scale / self.s_abs ** 2 * (1.0 / 3.0 + _decay_integral(4, rate, self.growth)) + (
                scale * t / self.s_abs * 0.5
            )
        raise DomainError(f"tail bounds exist for primitive orders 0, 1, 2, got {order}")


def _decay_integral(power: int, rate: float, growth: float) -> float:
    """∫_1^∞ u^{-power} exp(rate u^growth) du."""
    if rate == 0.0 or growth == 0.0:
        return float(np.exp(rate)) / (power - 1)
    if rate > 0.0:
        return float("inf")
    value, _ = integrate.quad(lambda u: u ** -power * np.exp(rate * u ** growth), 1.0, np.inf, limit=200)
    return float(value)


@dataclass(frozen=True)
class ModeSet:
    kappa: float
    model: object
    modes: Tuple[Mode, ...]
    n_max: int
    c_inf: Optional[float] = None
    tail: Dict[KernelKind, TailFit] = field(default_factory=dict)
    _grown: Dict[int, "ModeSet"] = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    @property
    def unresolved(self) -> Tuple[int, ...]:
        return tuple(m.index for m in self.modes if not m.resolved)

    @cached_property
    def _resolved(self) -> Tuple[Mode, ...]:
        return tuple(m for m in self.modes if m.resolved)

    @cached_property
    def index(self) -> np.ndarray:
        return np.array([m.index for m in self._resolved], dtype=float)

    @cached_property
    def w(self) -> np.ndarray:
        return np.array([m.w for m in self._resolved], dtype=float)

    @cached_property
    def s(self) -> np.ndarray:
        return np.array([m.s for m in self._resolved], dtype=complex)

    @cached_property
    def dsm(self) -> np.ndarray:
        return np.array([m.dsm for m in self._resolved], dtype=complex)

    @cached_property
    def denom(self) -> np.ndarray:
        return np.array([m.denom for m in self._resolved], dtype=float)

    @property
    def xi_max(self) -> float:
        if not self._resolved:
            return 0.0
        return float(max(m.xi for m in self._resolved))

    def tail_bound(self, kind: KernelKind, t: float, order: int = 0) -> float:
        """Bound on the two-sided residue tail beyond n_max at time t >= 0.

        order 1 and 2 bound the tails of the first and second time
        primitives of the kernel.
        """
        fit = self.tail.get(KernelKind(kind))
        if fit is None:
            return 0.0
        return fit.bound(self.n_max, t, order)

    def extended(self, n_max: int) -> "ModeSet":
        """This set continued to n_max modes; the result is cached."""
        if n_max <= self.n_max:
            return self
        with self._lock:
            grown = self._grown.get(n_max)
            if grown is None:
                grown = _extend(self, n_max)
                self._grown[n_max] = grown
        return grown

    def largest_extension(self) -> int:
        """Size of the largest set grown from this one so far."""
        with self._lock:
            grown = list(self._grown.values())
        return max([self.n_max, *(g.largest_extension() for g in grown)])

    def sufficient(self, kind: KernelKind, t: float, budget: float,
                   max_modes: int = MAX_MODES, order: int = 0) -> "ModeSet":
        """The smallest doubling of this set whose tail at t fits the budget.

        Stops at max_modes, and does not grow at all when the fitted tail law
        says even max_modes would not reach the budget.
        """
        kind = KernelKind(kind)
        current = self
        while current.n_max < max_modes and current.tail_bound(kind, t, order) > budget:
            fit = current.tail.get(kind)
            if fit is None:
                break
            ceiling = fit.projected(max_modes / current.n_max).bound(max_modes, t, order)
            if ceiling > budget:
                break
            target = min(2 * current.n_max, max_modes)
            while target < max_modes and fit.projected(target / current.n_max).bound(target, t, order) > budget:
                target = min(2 * target, max_modes)
            current = current.extended(target)
        return current

    def ratios(self, mode: Mode) -> Tuple[float, float]:
        """(w κ / (mπ), ζ c∞ κ / (mπ)) with branch m = n - 1; nan for n = 1."""
        m = mode.index - 1
        if m == 0:
            return float("nan"), float("nan")
        scale = m * np.pi / self.kappa
        c_inf = self.c_inf if self.c_inf is not None else float("nan")
        return mode.w / scale, mode.zeta * c_inf / scale

    def to_csv(self, target: Union[str, Path, io.TextIOBase]) -> None:
        if isinstance(target, (str, Path)):
            with open(target, "w", newline="", encoding="utf-8") as fh:
                self._write_csv(fh)
        else:
            self._write_csv(target)

    def _write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MODE_CSV_HEADER)
        for mode in self.modes:
            w_ratio, zeta_ratio = self.ratios(mode)
            writer.writerow([
                mode.index,
                fmt_float(mode.w),
                fmt_float(mode.s.real),
                fmt_float(mode.s.imag),
                fmt_float(mode.dsm.real),
                fmt_float(mode.dsm.imag),
                fmt_float(mode.denom),
                fmt_float(mode.residual),
                _ratio_cell(w_ratio),
                _ratio_cell(zeta_ratio),
                "true" if mode.resolved else "false",
            ])


def _ratio_cell(value: float) -> str:
    # undefined ratios (first mode, unknown c_inf) stay empty
    return "" if np.isnan(value) else fmt_float(value)


def residue_amplitudes(mode_set: ModeSet, kind: KernelKind) -> np.ndarray:
    """Per-mode bound of |residue_n| / e^{ξ_n t}, uniform in x ∈ [0, 1]."""
    kind = KernelKind(kind)
    base = np.abs(mode_set.denom) * np.abs(mode_set.s) * np.abs(mode_set.dsm)
    if kind is KernelKind.DISPLACEMENT_P:
        return mode_set.w / (base * np.abs(mode_set.s))
    return mode_set.kappa / base


def _exponent_growth(n: np.ndarray, xi: np.ndarray) -> float:
    """Power-law rate of ξ_n → -∞ over the last octave of computed modes, 0 if none."""
    n_hi, xi_hi = n[-1], xi[-1]
    lo = int(np.argmin(np.abs(n - n_hi / 2.0)))
    n_lo, xi_lo = n[lo], xi[lo]
    if n_hi / n_lo < 1.5 or not xi_hi < xi_lo < 0.0:
        return 0.0
    slope = np.log(xi_hi / xi_lo) / np.log(n_hi / n_lo)
    return float(GROWTH_SHRINK * np.clip(slope, 0.0, 1.0))


def _fit_tail(mode_set: ModeSet, kind: KernelKind) -> Optional[TailFit]:
    n = mode_set.index
    if n.size == 0:
        return None
    amplitude = residue_amplitudes(mode_set, kind)
    xi = mode_set.s.real
    use = n >= TAIL_FIT_FIRST_INDEX
    if use.sum() < 3:
        use = np.zeros_like(use)
        use[-min(3, n.size):] = True
    K = float(np.max(amplitude[use] * n[use] ** 2))
    a = float(np.max(xi[use]))
    last = xi[-min(3, xi.size):]
    growth = 0.0
    # exponents decreasing at the end of the ladder: trust them for the tail
    if np.all(np.diff(xi[use]) <= 1e-12):
        a_tail = float(np.max(last))
        growth = _exponent_growth(n[use], xi[use])
    else:
        a_tail = a
    s_abs = float(np.abs(mode_set.s[-1]) * mode_set.n_max / n[-1])
    return TailFit(K=K, a=a, a_tail=a_tail, first_index=int(n[use][0]), growth=growth, s_abs=s_abs)


def _hookean_modes(model, kappa: float, first: int, n_max: int) -> List[Mode]:
    ladder = frequency_ladder(kappa, n_max)
    w = ladder.w[first - 1:]
    s = 1j * w
    residual = np.abs(eval_f(model, kappa, s))
    denom = ladder.denom[first - 1:]
    return [
        Mode(
            index=int(n), w=float(wn), s=complex(sn), dsm=1.0 + 0.0j, denom=float(dn),
            residual=float(rn), resolved=bool(abs(dn) >= SIMPLE_POLE_MIN_DENOM),
            note="" if abs(dn) >= SIMPLE_POLE_MIN_DENOM else "small denom",
        )
        for n, wn, sn, dn, rn in zip(ladder.index[first - 1:], w, s, denom, residual)
    ]


def _general_modes(model, kappa: float, first: int, n_max: int,
                   earlier: Tuple[Mode, ...] = ()) -> List[Mode]:
    """Modes first..n_max, each lift seeded by the last resolved pole."""
    ladder = frequency_ladder(kappa, n_max)
    accepted = [m.s for m in earlier if m.resolved]
    previous = next(((m.w, m.s) for m in reversed(earlier) if m.resolved), None)
    modes = []
    rows = zip(ladder.index[first - 1:], ladder.w[first - 1:], ladder.denom[first - 1:])
    for n, w, denom in rows:
        n, w, denom = int(n), float(w), float(denom)
        try:
            s = lift_to_pole(model, kappa, w, previous=previous)
        except (ConvergenceError, EvaluationError) as exc:
            logger.warning(f"mode {n} unresolved: {exc}")
            modes.append(Mode(n, w, complex("nan"), complex("nan"), denom, float("inf"), False, str(exc)))
            continue
        dsm = complex(eval_sM_derivative(model, s))
        residual = abs(eval_f(model, kappa, s))
        note = ""
        if abs(denom) < SIMPLE_POLE_MIN_DENOM:
            note = "small denom, possible multiple pole"
        elif any(abs(s - p) < 1e-8 * (1.0 + abs(s)) for p in accepted[-8:]):
            note = "duplicate of an earlier pole"
        elif residual > POLE_RESIDUAL_TOL * max(1.0, abs(s)):
            note = f"residual {residual:.3e} above tolerance"
        resolved = not note
        if resolved:
            accepted.append(s)
            previous = (w, s)
        else:
            logger.warning(f"mode {n} unresolved: {note}")
        modes.append(Mode(n, w, s, dsm, denom, residual, resolved, note))
    return modes


def _assemble(model, kappa: float, modes: Tuple[Mode, ...], n_max: int) -> ModeSet:
    limits = model_limits(model)
    mode_set = ModeSet(
        kappa=float(kappa), model=model, modes=modes, n_max=n_max,
        c_inf=limits.c_inf if limits else None,
    )
    tail = {}
    for kind in KernelKind:
        fit = _fit_tail(mode_set, kind)
        if fit is not None:
            tail[kind] = fit
    return ModeSet(
        kappa=mode_set.kappa, model=model, modes=modes, n_max=n_max, c_inf=mode_set.c_inf, tail=tail,
    )


def _extend(mode_set: ModeSet, n_max: int) -> ModeSet:
    model, kappa = mode_set.model, mode_set.kappa
    first = mode_set.n_max + 1
    if model.is_hookean:
        more = _hookean_modes(model, kappa, first, n_max)
    else:
        more = _general_modes(model, kappa, first, n_max, mode_set.modes)
    grown = _assemble(model, kappa, mode_set.modes + tuple(more), n_max)
    logger.info(f"extended {model.describe()} (kappa={kappa:g}) from {mode_set.n_max} to {n_max} modes")
    return grown


def build_mode_set(model, kappa: float, n_max: int = DEFAULT_N_MAX, allow_unsafe: bool = False) -> ModeSet:
    """Frequencies, poles, d(sM)/ds and simple-pole denominators for modes 1..n_max."""
    if not kappa > 0.0:
        raise DomainError("kappa must be positive")
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    require_safe(model, allow_unsafe)

    if model.is_hookean:
        modes = _hookean_modes(model, kappa, 1, n_max)
    else:
        modes = _general_modes(model, kappa, 1, n_max)

    mode_set = _assemble(model, kappa, tuple(modes), n_max)
    if mode_set.unresolved:
        logger.warning(f"{len(mode_set.unresolved)} of {n_max} modes unresolved: {mode_set.unresolved}")
    logger.info(f"built {n_max} modes for {model.describe()} (kappa={kappa:g}), xi_max={mode_set.xi_max:.6g}")
    return mode_set
