from .builtins import NAMES as BUILTIN_NAMES, RING_TOPOLOGY, builtin, vn_text, wn_text
from .evaluate import (
    FAILS,
    HOLDS,
    EvalResult,
    Structure,
    WitnessNode,
    arithmetic_height,
    evaluate,
    positive_scales,
    replay,
    standard_structure,
)
from .polarity import PolarityOk, Violation, check_polarity
from .syntax import MAX_SUMMANDS, Sentence, parse_sentence, print_sentence
