"""Plane cubics over finite fields, their inflection configurations and
Heisenberg symmetry groups, Galois descent, and cubic symbol algebras over
local fields of Laurent series."""

from .field import FieldError, FieldSpec, FieldElem, UniPoly, make_field
from .projlin import Mat3, ProjLine, ProjMat, ProjPoint
from .cubic import CubicForm, WeierstrassCurve, inflection_points, is_smooth, j_invariant, weil3
from .hesse import EIGroup, InflectionConfig, aff_group, build_EI, canonical_cocycle
from .heisenberg import SGroup, fixed_pencil, inflections_to_S, s_to_inflections, standard_pair
from .cohomology import GaloisSetup, descent_construct, h1, unique_gamma_check
from .localarith import LocalField, QuadraticExtension, SymbolAlgebra, cor19_decide, prop17_decide

__version__ = "0.1.0"

__all__ = [
    "FieldError", "FieldSpec", "FieldElem", "UniPoly", "make_field",
    "Mat3", "ProjLine", "ProjMat", "ProjPoint",
    "CubicForm", "WeierstrassCurve", "inflection_points", "is_smooth", "j_invariant", "weil3",
    "EIGroup", "InflectionConfig", "aff_group", "build_EI", "canonical_cocycle",
    "SGroup", "fixed_pencil", "inflections_to_S", "s_to_inflections", "standard_pair",
    "GaloisSetup", "descent_construct", "h1", "unique_gamma_check",
    "LocalField", "QuadraticExtension", "SymbolAlgebra", "cor19_decide", "prop17_decide",
]
