"""Exact homology and cohomology-ring computations for graph manifolds."""

from .exactlin import RatMatrix, congruence_diagonalize, free_column_kernel, kernel, rref
from .homology import H1Basis, connectivity_matrix, h1_basis, kernel_surfaces
from .intersection import ProductTable, product_table, to_trivector
from .plumbing import (CriticalFiber, GluingEdge, ParseError, PlumbingEdge, PlumbingGraph,
                       RawGraph, SeifertNode, ValidationError, normalize, normalize_gluing,
                       parse, parse_raw)
from .trivector import Trivector, analyze, obstruct, radical, rank3_split_dim6

__version__ = "0.1.0"
