from ..modes import KernelKind
from ._branch_cut import branch_cut_integrand_P, branch_cut_integrand_sigma
from ._config import DEFAULT_TOL, KernelSample, KernelSpec, QuadratureConfig
from ._elastic import elastic_P, elastic_sigma_bound, elastic_sigma_H, elastic_step_discrepancy
from ._kernel import (
    CutCalibration,
    ExponentialResponse,
    calibrate_cut_side,
    calibrate_cut_sides,
    eval_exponential_response,
    eval_kernel,
    eval_P,
    eval_primitive,
    eval_sigma_H,
    eval_step_displacement,
)
from ._residues import residue_coefficients, residue_terms

__all__ = [
    "KernelKind",
    "branch_cut_integrand_P",
    "branch_cut_integrand_sigma",
    "DEFAULT_TOL",
    "KernelSample",
    "KernelSpec",
    "QuadratureConfig",
    "elastic_P",
    "elastic_sigma_bound",
    "elastic_sigma_H",
    "elastic_step_discrepancy",
    "CutCalibration",
    "ExponentialResponse",
    "calibrate_cut_side",
    "calibrate_cut_sides",
    "eval_exponential_response",
    "eval_kernel",
    "eval_P",
    "eval_primitive",
    "eval_sigma_H",
    "eval_step_displacement",
    "residue_coefficients",
    "residue_terms",
]
