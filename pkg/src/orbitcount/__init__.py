"""Approximate counting of group-action orbits: Burnside process plus
importance sampling over a nested sequence of groups, specialized to
conjugacy classes of unitriangular groups and to colorings under
coordinate permutation."""

from ._backend import backend_name
from .estimator import (ChainConfig, FailedLevelError, GuardExceededError,
                        LogCountEstimate, MultisetProblem, RatioEstimate,
                        UnitriangularProblem, estimate_count)
from .field import FieldContext, field_context
from .multiset import exact_multiset_count
from .pattern import ClosedPositionSet, NestedSequence, nested_sequence
from .rngstream import RawStream, stream_for

__all__ = [
    "ChainConfig",
    "ClosedPositionSet",
    "FailedLevelError",
    "FieldContext",
    "GuardExceededError",
    "LogCountEstimate",
    "MultisetProblem",
    "NestedSequence",
    "RatioEstimate",
    "RawStream",
    "UnitriangularProblem",
    "backend_name",
    "estimate_count",
    "exact_multiset_count",
    "field_context",
    "nested_sequence",
    "stream_for",
]

__version__ = "0.1.0"
