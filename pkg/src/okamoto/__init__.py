"""Okamoto's self-affine functions F_a at rational points.

Exact evaluation, classification of F_a'(x), beta-expansion tools for the
infinite-derivative set, and the associated dimension formulas.
"""

from .beta import BinaryEPSeq, greedy_expansion_of_one, is_unique_expansion, thue_morse
from .classifier import DerivClass, Tag, classify, critical_parameter, side_condition
from .errors import (
    DomainError,
    OkamotoError,
    ParseError,
    PreconditionError,
    RegimeError,
    ResourceError,
)
from .numerics import Bracket, bisect, constants
from .selfaffine import Param, evaluate, fn_eval, sample_graph
from .ternary import EventuallyPeriodicTernary, expand, parse_digits

__version__ = "0.1.0"

__all__ = [
    "BinaryEPSeq",
    "Bracket",
    "DerivClass",
    "DomainError",
    "EventuallyPeriodicTernary",
    "OkamotoError",
    "Param",
    "ParseError",
    "PreconditionError",
    "RegimeError",
    "ResourceError",
    "Tag",
    "bisect",
    "classify",
    "constants",
    "critical_parameter",
    "evaluate",
    "expand",
    "fn_eval",
    "greedy_expansion_of_one",
    "is_unique_expansion",
    "parse_digits",
    "sample_graph",
    "side_condition",
    "thue_morse",
]
