"""Exact computations for finite-dimensional ring extensions A|B."""
from .algebra import Algebra, Extension, make_extension, validate_algebra
from .exactlin import Mat, Q, Subspace

__version__ = "0.1.0"
__all__ = ["Algebra", "Extension", "Mat", "Q", "Subspace", "make_extension", "validate_algebra"]
