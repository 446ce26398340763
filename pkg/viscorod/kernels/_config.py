"""
Kernel settings and sample records.
"""
from dataclasses import dataclass, field, replace
from typing import FrozenSet, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..constitutive import CutSide
from ..errors import DomainError, SampleFlag
from ..modes import MAX_MODES, KernelKind, ModeSet

DEFAULT_TOL = 1e-6


class QuadratureConfig(BaseModel):
    """Panel layout and truncation of the branch-cut integral."""

    model_config = ConfigDict(frozen=True)

    q_split: Tuple[float, ...] = Field(
        default=(1e-3, 1.0, 10.0, 100.0),
        description="Breakpoints on (0, ∞), scaled by max(1, 1/t)",
    )
    rel_tol: float = Field(default=1e-8, gt=0.0, le=1e-3, description="Relative tolerance per panel")
    q_max_static: float = Field(
        default=1e6, gt=0.0, description="Truncation point when the integrand has no e^{-qt} decay"
    )
    panel_limit: int = Field(default=200, ge=10, description="Subinterval limit per QUADPACK call")

    @field_validator("q_split")
    @classmethod
    def _sorted_positive(cls, v):
        if not v or any(q <= 0.0 for q in v) or list(v) != sorted(v):
            raise ValueError("q_split must be a nonempty increasing tuple of positive breakpoints")
        return tuple(v)

    def breakpoints(self, t: float, q_max: float) -> np.ndarray:
        """Panel edges in (0, q_max], including decades up to q_max."""
        scale = max(1.0, 1.0 / t) if t > 0.0 else 1.0
        points = {q * scale for q in self.q_split}
        if t > 1.0:
            points.update({1.0 / t, 10.0 / t})
        top = max(points)
        while top * 10.0 < q_max:
            top *= 10.0
            points.add(top)
        points = sorted(p for p in points if p < q_max)
        return np.array([0.0, *points, q_max])

    def q_max(self, t: float, tol: float, bound: float) -> float:
        """Truncation point where the e^{-qt} tail of a |integrand| <= bound is below tol/10."""
        if t <= 0.0:
            return self.q_max_static
        last = max(self.q_split) * max(1.0, 1.0 / t)
        cut = np.log(max(10.0 * bound / (tol * t), 1.0 + 1e-12)) / t
        return float(max(last, cut))


@dataclass(frozen=True)
class KernelSpec:
    kind: KernelKind
    model: object
    kappa: float
    modes: ModeSet
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    tol: float = DEFAULT_TOL
    cut_side: Optional[CutSide] = None
    max_modes: int = MAX_MODES

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))
        if self.modes.model != self.model or self.modes.kappa != self.kappa:
            raise DomainError("kernel spec and mode set were built from different (model, kappa)")
        if not self.tol > 0.0:
            raise DomainError("tol must be positive")
        if self.max_modes < self.modes.n_max:
            object.__setattr__(self, "max_modes", self.modes.n_max)
        if self.cut_side is None:
            default = CutSide.LOWER if self.kind is KernelKind.DISPLACEMENT_P else CutSide.UPPER
            object.__setattr__(self, "cut_side", default)
        else:
            object.__setattr__(self, "cut_side", CutSide(self.cut_side))

    @classmethod
    def for_modes(cls, kind, modes: ModeSet, **kwargs) -> "KernelSpec":
        return cls(kind=kind, model=modes.model, kappa=modes.kappa, modes=modes, **kwargs)

    def with_side(self, side: CutSide) -> "KernelSpec":
        return replace(self, cut_side=CutSide(side))

    def with_tol(self, tol: float) -> "KernelSpec":
        return replace(self, tol=tol)

    def modes_for(self, t: float, order: int = 0) -> ModeSet:
        """Modes whose residue tail at t fits half of tol, grown up to max_modes."""
        return self.modes.sufficient(self.kind, t, self.tol / 2.0, self.max_modes, order)


@dataclass(frozen=True)
class KernelSample:
    value: float
    error: float = 0.0
    flags: FrozenSet[SampleFlag] = frozenset()

    def __float__(self) -> float:
        return self.value


ZERO = KernelSample(0.0, 0.0)
