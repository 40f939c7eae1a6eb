"""bigmul: arbitrary-precision integer multiplication from schoolbook to DKSS.

The full ladder (omul, kmul, t3mul, qmul, smul, dmul) shares one word-level
number representation and one generic FFT kernel; `mul` dispatches by the
calibrated crossover table.
"""

from .basecase import ThresholdTable, default_thresholds, kmul, omul, set_default_thresholds, t3mul
from .bench import lucas_lehmer, run_bench
from .dispatch import ALGORITHMS, mul
from .dkss import dkss_select_params, dmul
from .qmul import InputTooLongError, ntt_select_param, qmul
from .smul import smul, smul_mod, smul_select_params
from .words import (
    Natural,
    ScratchArena,
    set_word_bits,
    using_word_bits,
    word_bits,
)

__all__ = [
    "ALGORITHMS",
    "InputTooLongError",
    "Natural",
    "ScratchArena",
    "ThresholdTable",
    "default_thresholds",
    "dkss_select_params",
    "dmul",
    "kmul",
    "lucas_lehmer",
    "mul",
    "ntt_select_param",
    "omul",
    "qmul",
    "run_bench",
    "set_default_thresholds",
    "set_word_bits",
    "smul",
    "smul_mod",
    "smul_select_params",
    "t3mul",
    "using_word_bits",
    "word_bits",
]
