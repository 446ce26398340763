"""
Model description grammar:

    elastic
    zener alpha=<f> a=<f> b=<f>
    powerlaw a=<f> b=<f>
    hilfer a=<f> alpha=<f> b0=<f> b1=<f> b2=<f> beta0=<f> beta1=<f> beta2=<f>
"""
from typing import Dict, Tuple

from pydantic import TypeAdapter, ValidationError

from ..errors import ModelSpecError
from ._models import ConstitutiveModel, Elastic, FractionalZener, HilferFluid, PowerLaw

_KINDS = {
    "elastic": Elastic,
    "zener": FractionalZener,
    "powerlaw": PowerLaw,
    "hilfer": HilferFluid,
}

_model_adapter = TypeAdapter(ConstitutiveModel)


def split_spec(text: str) -> Tuple[str, Dict[str, str]]:
    """Split `kind key=value ...` into the kind and a key → raw value map."""
    tokens = text.split()
    if not tokens:
        raise ModelSpecError("empty model or forcing description")
    kind = tokens[0].lower()
    params: Dict[str, str] = {}
    for token in tokens[1:]:
        key, sep, value = token.partition("=")
        if not sep or not key or not value:
            raise ModelSpecError(f"expected key=value, got '{token}'")
        if key in params:
            raise ModelSpecError(f"parameter '{key}' given twice")
        params[key] = value
    return kind, params


def to_floats(params: Dict[str, str]) -> Dict[str, float]:
    values = {}
    for key, raw in params.items():
        try:
            values[key] = float(raw)
        except ValueError:
            raise ModelSpecError(f"parameter '{key}' is not a number: '{raw}'") from None
    return values


def describe_validation_error(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err.get("loc", ()) if p not in _KINDS)
        msg = err.get("msg", "invalid value")
        msg = msg.removeprefix("Value error, ")
        parts.append(f"{loc}: {msg}" if loc else msg)
    return "; ".join(parts)


def parse_model(text: str):
    """Parse a constitutive model from its description string."""
    kind, params = split_spec(text)
    cls = _KINDS.get(kind)
    if cls is None:
        raise ModelSpecError(f"unknown model kind '{kind}' (expected one of {', '.join(_KINDS)})")
    allowed = set(cls.model_fields) - {"kind"}
    unknown = sorted(set(params) - allowed)
    if unknown:
        raise ModelSpecError(f"unknown parameter(s) for {kind}: {', '.join(unknown)}")
    values = to_floats(params)
    try:
        return _model_adapter.validate_python({"kind": kind, **values})
    except ValidationError as exc:
        raise ModelSpecError(describe_validation_error(exc)) from None
