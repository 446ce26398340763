from ._assumptions import AssumptionReport, check_assumptions
from ._evaluate import (
    ComplexS,
    CutSide,
    check_in_domain,
    eval_M,
    eval_M_on_cut,
    eval_sM_derivative,
    m_from_log,
    require_safe,
)
from ._grammar import parse_model
from ._models import (
    THERMODYNAMIC_RESTRICTION,
    ConstitutiveModel,
    Elastic,
    FractionalZener,
    HilferFluid,
    ModelLimits,
    PowerLaw,
    model_limits,
)

__all__ = [
    "AssumptionReport",
    "check_assumptions",
    "ComplexS",
    "CutSide",
    "check_in_domain",
    "eval_M",
    "eval_M_on_cut",
    "eval_sM_derivative",
    "m_from_log",
    "require_safe",
    "parse_model",
    "THERMODYNAMIC_RESTRICTION",
    "ConstitutiveModel",
    "Elastic",
    "FractionalZener",
    "HilferFluid",
    "ModelLimits",
    "PowerLaw",
    "model_limits",
]
