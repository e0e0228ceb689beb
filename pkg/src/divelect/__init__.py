"""Diversity of labelled committees in approval elections."""

from .errors import (
    ConfigurationError,
    DerivationError,
    DivelectError,
    InvalidCommittee,
    InvalidElection,
    InvariantViolation,
    ParseError,
    ResourceLimitError,
    SizeLimitError,
)
from .indices import DiversityValue, IndexKind, Verdict, compare, index_value
from .model import Committee, DistrVector, Election, distr, label_counts, satisfaction
from .scoring import ScoreKind, SeparableWeights

__version__ = "0.1.0"

__all__ = [
    "Committee", "ConfigurationError", "DerivationError", "DistrVector", "DiversityValue",
    "DivelectError", "Election", "IndexKind", "InvalidCommittee", "InvalidElection",
    "InvariantViolation", "ParseError", "ResourceLimitError", "ScoreKind", "SeparableWeights",
    "SizeLimitError", "Verdict", "compare", "distr", "index_value", "label_counts", "satisfaction",
]
