from ._convolution import compose_sigma, compose_u, convolve
from ._signals import (
    ForcingSignal,
    Heaviside,
    Impulse,
    PowerStep,
    Sinusoid,
    Tabulated,
    eval_F,
    laplace_F,
    laplace_transform,
    load_tabulated,
    parse_forcing,
)

__all__ = [
    "compose_sigma",
    "compose_u",
    "convolve",
    "ForcingSignal",
    "Heaviside",
    "Impulse",
    "PowerStep",
    "Sinusoid",
    "Tabulated",
    "eval_F",
    "laplace_F",
    "laplace_transform",
    "load_tabulated",
    "parse_forcing",
]
