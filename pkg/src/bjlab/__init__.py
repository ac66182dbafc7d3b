"""Birkhoff-James orthogonality and left/right symmetric points in
finite-dimensional l_p, polyhedral and sup-sum spaces, and in operator spaces."""

from .orthogonality import Decision, OrthoVerdict, is_bj_functional, is_bj_min
from .spaces import Lp, Polyhedral, SupSum, dual_norm, format_space, norm, parse_space, real_line

__version__ = "0.1.0"

__all__ = [
    "Decision",
    "Lp",
    "OrthoVerdict",
    "Polyhedral",
    "SupSum",
    "dual_norm",
    "format_space",
    "is_bj_functional",
    "is_bj_min",
    "norm",
    "parse_space",
    "real_line",
]
