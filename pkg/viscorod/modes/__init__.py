from ._argument import count_zeros, pole_disc_radius
from ._frequencies import FrequencyLadder, find_frequencies, frequency_ladder
from ._mode_set import (
    DEFAULT_N_MAX,
    MAX_MODES,
    MODE_CSV_HEADER,
    KernelKind,
    Mode,
    ModeSet,
    TailFit,
    build_mode_set,
    residue_amplitudes,
)
from ._poles import eval_f, lift_to_pole

__all__ = [
    "count_zeros",
    "pole_disc_radius",
    "FrequencyLadder",
    "find_frequencies",
    "frequency_ladder",
    "DEFAULT_N_MAX",
    "MAX_MODES",
    "MODE_CSV_HEADER",
    "KernelKind",
    "Mode",
    "ModeSet",
    "TailFit",
    "build_mode_set",
    "residue_amplitudes",
    "eval_f",
    "lift_to_pole",
]
