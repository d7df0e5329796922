"""Consistent-histories engine for small finite-dimensional systems."""

__version__ = "0.1.0"

from .errors import HistoriesError
from .hilbert import Decomposition, Projector, StateVector, UnitVector3, projector_from_vector
from .histories import (
    HistoryFramework,
    check_consistency,
    conditional_probability,
    decoherence_matrix,
    probability_tree,
    two_time_framework,
)
from .retrodiction import PairKind, classify_pair, cross_framework_report, find_certain_retrodictions
