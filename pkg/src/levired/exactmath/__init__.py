"""Exact scalar, polynomial and Laurent-matrix arithmetic."""

from .laurent import Laurent, LaurentMatrix, MLaurent
from .poly import Poly, poly_squarefree_split
from .roots import SearchBudget, poly_split_roots
from .scalar import Scalar, parse_scalar

__all__ = [
    "Laurent",
    "LaurentMatrix",
    "MLaurent",
    "Poly",
    "Scalar",
    "SearchBudget",
    "parse_scalar",
    "poly_split_roots",
    "poly_squarefree_split",
]
