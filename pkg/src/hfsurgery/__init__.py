"""Exact GF(2) surgery complexes for knot Floer data."""

from .chain import (
    ChainComplex,
    ChainMap,
    GradedSpace,
    UngradedComplex,
    cancel_pair,
    direct_sum,
    homology_dims,
    mapping_cone,
    reduce,
    tensor,
    tensor_map,
    ungraded_homology,
    validate_complex,
)
from .f2linalg import BitMatrix, kernel_basis, rank, rref
from .knotsys import BorderedSystem, KnotSystem, bordered_from_knotsys, builtin, random_valid, validate
from .lensmodel import build_model, model_homology
from .surgery import SurgerySlope, build_rational, build_splice, build_zigzag, compare_methods

__version__ = "0.1.0"
