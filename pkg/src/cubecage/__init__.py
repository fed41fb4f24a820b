"""Combinatorics of finite CAT(0) cube complexes given as median graphs."""
from .errors import (CubeCageError, InputError, NotMedianError, PreconditionError,
                     ResourceError, VerificationError)
from .graph import SimplicialGraph, is_join, join_decomposition
from .median import CubeComplex, convex_hull, interval, is_convex, is_median, median

__all__ = [
    "CubeCageError", "InputError", "NotMedianError", "PreconditionError", "ResourceError",
    "VerificationError", "SimplicialGraph", "is_join", "join_decomposition", "CubeComplex",
    "convex_hull", "interval", "is_convex", "is_median", "median",
]
__version__ = "0.1.0"
