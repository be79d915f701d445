"""Klein geometries over finite fields as explicit permutation groups.

The automorphism group of a geometry (X, G) is the normalizer of G in the
group of all bijections of X.  This package builds projective and affine
geometries over GF(q), computes those normalizers exhaustively, and checks
them against groups of semilinear maps.
"""

from .finite_field import Field, FieldAut, make_field
from .klein import (
    KleinGeometry, VerificationReport, affine_geometry, automorphism_group, h_set,
    lemma1_collinear, projective_geometry, verify_theorem_affine,
)
from .perm_group import PermGroup, generate, normalizer_brute, normalizes
from .projective_space import AffinePatch, ProjSpace, enumerate_points
from .s6_outer import build_outer_automorphism, verify_outer
from .staudt import SemilinearMap, decompose_staudt, pgammal_group, pgl_group, projectivize

__version__ = "0.1.0"

__all__ = [
    "AffinePatch", "Field", "FieldAut", "KleinGeometry", "PermGroup", "ProjSpace",
    "SemilinearMap", "VerificationReport", "affine_geometry", "automorphism_group",
    "build_outer_automorphism", "decompose_staudt", "enumerate_points", "generate", "h_set",
    "lemma1_collinear", "make_field", "normalizer_brute", "normalizes", "pgammal_group",
    "pgl_group", "projective_geometry", "projectivize", "verify_outer", "verify_theorem_affine",
]
