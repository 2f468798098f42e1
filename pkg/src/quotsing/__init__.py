"""Exact computations for quotient singularities of finite linear groups
over finite fields: invariant rings, fixator lattices and smoothness verdicts."""

from __future__ import annotations

from .field import FieldElement, FieldSpec, GF
from .group import MatrixGroup, closure
from .linalg import SquareMatrix, Subspace

__version__ = "0.1.0"

__all__ = ["FieldSpec", "FieldElement", "GF", "SquareMatrix", "Subspace", "MatrixGroup",
           "closure", "__version__"]
