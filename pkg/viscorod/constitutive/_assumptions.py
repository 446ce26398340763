"""
Sampled diagnostics of the analytic assumptions on M.

The checks are heuristics on a finite sample, so the verdicts are
advisory: nothing here raises.
"""
import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field

from ..errors import DomainError, ViscorodError
from ._evaluate import eval_M, eval_sM_derivative
from ._models import model_limits

logger = logging.getLogger(__name__)

RAY_ANGLES = (0.0, np.pi / 4, -np.pi / 4, np.pi / 2, -np.pi / 2, 3 * np.pi / 4, -3 * np.pi / 4)

A3_MIN_DERIVATIVE = 1e-3
A4_STEP = 1e-3
A4_MAX_JUMP = 0.1
SMALL_S_GROWTH_LIMIT = 10.0
B_GROWTH_LIMIT = 2.0


class AssumptionReport(BaseModel):
    """Outcome of `check_assumptions`."""

    model: str = Field(description="Model in description grammar")
    s_max: float
    n_samples: int
    c_inf: float = Field(description="Measured Re M at |s| = s_max on the positive axis")
    c_0: float = Field(description="Measured |M| at |s| = 1/s_max on the positive axis")
    analytic_c_inf: Optional[float] = None
    analytic_c_0: Optional[float] = None
    im_tail: float = Field(description="max |Im M| over the rays at |s| = s_max")
    im_peak: float = Field(description="max |Im M| over all samples")
    small_s_growth: float = Field(description="|M(1e-8)| / |M(1e-1)|")
    max_upper_im: float = Field(description="max Im M on the upper rays, |s| >= 1")
    min_dsm: float = Field(description="min |d(sM)/ds| over |s| >= 1")
    max_jump: float = Field(description="max |(s+Δ)M(s+Δ) - sM(s)| for |Δ| = 1e-3")
    max_s_im: float = Field(description="max |s Im M| over |s| >= 1")
    s_im_growth: float = Field(description="sup |s Im M| on the outer decade / previous decade")
    a1: bool
    a2: bool
    a3: bool
    a4: bool
    b_holds: bool
    notes: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.a1 and self.a2 and self.a3 and self.a4

    def render(self) -> str:
        def verdict(ok: bool) -> str:
            return "pass" if ok else "FLAGGED"

        lines = [
            f"model: {self.model}",
            f"samples: {self.n_samples} radii x {len(RAY_ANGLES)} rays, s_max = {self.s_max:g}",
            f"c_inf (measured) = {self.c_inf:.10g}"
            + (f", analytic = {self.analytic_c_inf:.10g}" if self.analytic_c_inf is not None else ""),
            f"c_0   (measured) = {self.c_0:.10g}"
            + (f", analytic = {self.analytic_c_0:.10g}" if self.analytic_c_0 is not None else ""),
            f"(A1) limits / Im M decay: {verdict(self.a1)}  "
            f"[im_tail={self.im_tail:.3e}, im_peak={self.im_peak:.3e}, small-s growth={self.small_s_growth:.3e}]",
            f"(A2) Im M <= 0 in the upper half-plane: {verdict(self.a2)}  [max={self.max_upper_im:.3e}]",
            f"(A3) |d(sM)/ds| bounded below: {verdict(self.a3)}  [min={self.min_dsm:.3e}]",
            f"(A4) continuity of sM: {verdict(self.a4)}  [max jump={self.max_jump:.3e}]",
            f"(B)  |Im M| <= C/|s|: {verdict(self.b_holds)}  "
            f"[max |s Im M|={self.max_s_im:.3e}, decade growth={self.s_im_growth:.3f}]",
        ]
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)


def _ray_samples(s_max: float, n_samples: int):
    radii = np.logspace(-np.log10(s_max), np.log10(s_max), n_samples)
    angles = np.asarray(RAY_ANGLES)
    return radii, radii[:, None] * np.exp(1j * angles[None, :])


def _finite_max(values) -> float:
    values = np.asarray(values, dtype=float)
    values = values[np.isfinite(values)]
    return float(values.max()) if values.size else float("inf")


def check_assumptions(model, s_max: float = 1e6, n_samples: int = 64) -> AssumptionReport:
    """Sample M along seven rays and grade assumptions (A1)-(A4) and (B)."""
    if s_max <= 1.0:
        raise DomainError("s_max must exceed 1")
    if n_samples < 16:
        raise DomainError("n_samples must be at least 16")

    notes: List[str] = []
    radii, s = _ray_samples(s_max, n_samples)
    m = eval_M(model, s)
    outer = radii >= 1.0

    c_inf = float(eval_M(model, complex(s_max)).real)
    c_0 = float(abs(eval_M(model, complex(1.0 / s_max))))
    im = np.abs(m.imag)
    im_tail = float(im[-1].max())
    im_peak = float(im.max())

    small = eval_M(model, 10.0 ** -np.arange(1, 9, dtype=float) + 0j)
    small_s_growth = float(abs(small[-1]) / max(abs(small[0]), 1e-300))

    a1 = (
        np.isfinite(c_inf) and c_inf > 0.0
        and np.isfinite(c_0) and c_0 > 0.0
        and small_s_growth <= SMALL_S_GROWTH_LIMIT
        and (im_peak == 0.0 or im_tail < 0.5 * im_peak)
    )
    if small_s_growth > SMALL_S_GROWTH_LIMIT:
        notes.append("M(s) grows without bound as s → 0 (sampled on s = 1e-1 .. 1e-8)")
    if not c_inf > 1e-3 * max(c_0, 1.0):
        a1 = False
        notes.append("Re M appears to vanish as |s| → ∞")

    upper = np.asarray(RAY_ANGLES) > 0.0
    max_upper_im = float(m[outer][:, upper].imag.max())
    a2 = max_upper_im <= 1e-12

    s_outer = s[outer].ravel()
    try:
        dsm = np.abs(eval_sM_derivative(model, s_outer))
        min_dsm = float(dsm.min())
    except ViscorodError as exc:
        notes.append(f"derivative sampling failed: {exc}")
        min_dsm = 0.0
    a3 = min_dsm > A3_MIN_DERIVATIVE

    sm = s_outer * eval_M(model, s_outer)
    jump = 0.0
    for direction in (1.0, 1j, -1.0, -1j):
        shifted = s_outer + A4_STEP * direction
        jump = max(jump, _finite_max(np.abs(shifted * eval_M(model, shifted) - sm)))
    a4 = jump < A4_MAX_JUMP

    s_im = np.abs(s * m.imag)
    max_s_im = _finite_max(s_im[outer])
    decade = radii >= s_max / 10.0
    previous = (radii >= s_max / 100.0) & ~decade
    prev_sup = _finite_max(s_im[previous]) if np.any(previous) else 0.0
    last_sup = _finite_max(s_im[decade])
    s_im_growth = last_sup / prev_sup if prev_sup > 0.0 else (0.0 if last_sup == 0.0 else float("inf"))
    b_holds = s_im_growth < B_GROWTH_LIMIT

    limits = model_limits(model)
    if limits is None:
        notes.append("no analytic limits for this model; values above are measured only")

    report = AssumptionReport(
        model=model.describe(),
        s_max=s_max,
        n_samples=n_samples,
        c_inf=c_inf,
        c_0=c_0,
        analytic_c_inf=limits.c_inf if limits else None,
        analytic_c_0=limits.c_0 if limits else None,
        im_tail=im_tail,
        im_peak=im_peak,
        small_s_growth=small_s_growth,
        max_upper_im=max_upper_im,
        min_dsm=min_dsm,
        max_jump=jump,
        max_s_im=max_s_im,
        s_im_growth=s_im_growth,
        a1=bool(a1),
        a2=bool(a2),
        a3=bool(a3),
        a4=bool(a4),
        b_holds=bool(b_holds),
        notes=notes,
    )
    if report.passed:
        logger.info(f"assumption checks passed for {report.model}")
    else:
        logger.warning(
            f"assumption checks flagged for {report.model}: "
            f"A1={report.a1} A2={report.a2} A3={report.a3} A4={report.a4}"
        )
    return report
