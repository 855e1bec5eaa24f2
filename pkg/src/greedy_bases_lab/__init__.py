"""Greedy-type properties of Schauder bases relative to an index sequence."""

from .core import (
    AdmissiblePair,
    IndexSequence,
    PairContext,
    SparseVector,
    classify_pair,
    enumerate_pairs,
    indicator,
    prefix_project,
    project,
)
from .norms import NormSpec, NormValue, evaluate, get_norm, norm

__version__ = "0.1.0"

__all__ = [
    "AdmissiblePair",
    "IndexSequence",
    "NormSpec",
    "NormValue",
    "PairContext",
    "SparseVector",
    "classify_pair",
    "enumerate_pairs",
    "evaluate",
    "get_norm",
    "indicator",
    "norm",
    "prefix_project",
    "project",
]
