"""Exact genus-0 Gromov-Witten invariants of P^m and real invariants of P^(2n-1)."""
from .complex_engine import complex_invariant, normalize_axioms, wdvv_step
from .core import (
    CacheConflictError,
    CacheFormatError,
    ComplexKey,
    MemoStore,
    RealKey,
    cache_export,
    cache_import,
    canonicalize,
    complex_dimension_matches,
    real_dimension_matches,
)
from .real_engine import real_bracket, real_N, real_vanishes

__version__ = "0.1.0"

__all__ = [
    "CacheConflictError",
    "CacheFormatError",
    "ComplexKey",
    "MemoStore",
    "RealKey",
    "cache_export",
    "cache_import",
    "canonicalize",
    "complex_dimension_matches",
    "complex_invariant",
    "normalize_axioms",
    "real_N",
    "real_bracket",
    "real_dimension_matches",
    "real_vanishes",
    "wdvv_step",
]
