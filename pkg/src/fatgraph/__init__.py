"""Graph embeddings as permutation pairs, and how their genus changes under re-embedding."""

from .errors import BudgetExceeded, DisconnectedError, FatgraphError, InvariantError, ParseError
from .maps import Embedding, Graph, load_embedding, parse_rot, emit_rot
from .perm import CycleType, Permutation
from .planeperm import KCycPlanePermutation, PlanePermutation

__all__ = [
    "BudgetExceeded",
    "CycleType",
    "DisconnectedError",
    "Embedding",
    "FatgraphError",
    "Graph",
    "InvariantError",
    "KCycPlanePermutation",
    "ParseError",
    "Permutation",
    "PlanePermutation",
    "emit_rot",
    "load_embedding",
    "parse_rot",
]

__version__ = "0.1.0"
