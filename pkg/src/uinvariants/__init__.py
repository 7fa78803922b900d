"""Exact generators of the field of U-invariants of the adjoint action of GL(n)."""

from .errors import (
    BadIndex,
    BadOrder,
    DegenerateInput,
    MissingAssignment,
    NotInOmega,
    Singular,
    StructureViolation,
)
from .generators import (
    GenSet,
    build_J,
    build_X,
    build_Xstar,
    build_Y,
    check_invariance,
    generator_set,
    rho,
)
from .orbits import (
    Fingerprint,
    canonical_limit,
    canonicalize,
    classify,
    in_L,
    in_omega,
    independence_check,
    invariant_fingerprint,
    orbit_equivalent,
    slice_triangularity_check,
)
from .polycore import Poly, VarId, parse_poly, registry, s, t, x
from .ratfunc import RatFunc
from .slices import SlicePoint, TriDecomp, build_S, coord_cmp, restrict, solve_slice, tri_decompose
from .symmatrix import PolyMatrix, adjugate, corner_minor, det, mat_inverse, mat_mul

__version__ = "0.1.0"
