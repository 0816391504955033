"""Exact computations for the secondary Hochschild cohomology of algebra triples."""

from .field import QQ, FieldMismatch, PrimeField, parse_field
from .linalg import DimensionError, SparseMatrix, kernel_basis, rank, solve
from .algebra import (
    AlgebraMorphism,
    Bimodule,
    StructureAlgebra,
    Triple,
    epsilon_map,
    ground_field,
    group_algebra,
    matrix_algebra,
    regular_bimodule,
    truncated_polynomial_algebra,
    validate_algebra,
)
from .complex import (
    Cochain,
    CochainSpace,
    circle_product,
    classical_hochschild_dim,
    coboundary_matrix,
    cochain_dim,
    cohomology_dim,
    restriction_cochain_map,
)

__version__ = "0.1.0"
