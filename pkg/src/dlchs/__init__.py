"""Exact solver toolkit for hitting long directed cycles."""
from .errors import CapExceeded, GenerationFailure, InternalError, InvalidArgument, ParseError
from .graph import Digraph, OriginMap, MixedGraph

__all__ = [
    "CapExceeded",
    "Digraph",
    "GenerationFailure",
    "InternalError",
    "InvalidArgument",
    "MixedGraph",
    "OriginMap",
    "ParseError",
]
