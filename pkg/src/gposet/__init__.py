"""Free G-posets, their cross-index, and G-simplicial complexes over finite groups."""

from .complexes import (
    GSimplicialComplex,
    IndUpperReport,
    SimplicialGMap,
    boxtimes,
    e_space,
    face_poset,
    ind_upper,
    ind_zero,
    order_complex,
    subdivide,
)
from .crossindex import XindResult, build_counterexample, product_path, xind, xind_zero
from .errors import GPosetError, InvalidInputError, PreconditionError, ResourceGuardError
from .groups import FiniteGroup, group_from_name, is_nice, minimal_subgroups
from .posets import GPoset, PosetGMap, product, q_poset, validate_gmap, validate_gposet

__version__ = "0.1.0"

__all__ = [
    "FiniteGroup", "GPoset", "GSimplicialComplex", "IndUpperReport", "PosetGMap",
    "SimplicialGMap", "XindResult", "GPosetError", "InvalidInputError",
    "PreconditionError", "ResourceGuardError", "boxtimes", "build_counterexample",
    "e_space", "face_poset", "group_from_name", "ind_upper", "ind_zero", "is_nice",
    "minimal_subgroups", "order_complex", "product", "product_path", "q_poset",
    "subdivide", "validate_gmap", "validate_gposet", "xind", "xind_zero",
]
