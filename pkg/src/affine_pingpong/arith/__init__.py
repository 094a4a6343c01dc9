"""Exact arithmetic substrate: matrices, affine maps, quadratic fields, norms."""

from .balls import ball, ball_layers, ball_max_spectral_radius, conjugation_reduce
from .geometry import (
    EigenlineSeparation,
    FixedSet,
    RationalLine,
    eigenline_separation,
    eigenvalues,
    eigenvectors_arith,
    fixed_point,
    fs_distance_sq,
    intersect,
    unique_fixed_point,
    wedge,
)
from .literals import format_set, parse_element, parse_set
from .matrix import AffineElement, Mat2, RationalPoint, symmetrize
from .norms import (
    NormInterval,
    affine_norm,
    decide_greater,
    leading_eigenvalue,
    mat_norm_sq_below,
    op_norm,
    radius_exceeds_norm,
    set_norm,
    spectral_radius,
)
from .quadratic import QuadNumber, rational_str, sign_int_sqrt, sqrt_bounds
from .words import PAIR_ALPHABET, WordPath, evaluate, inverse_letter, reduce_word

__all__ = [
    "AffineElement",
    "EigenlineSeparation",
    "FixedSet",
    "Mat2",
    "NormInterval",
    "PAIR_ALPHABET",
    "QuadNumber",
    "RationalLine",
    "RationalPoint",
    "WordPath",
    "affine_norm",
    "ball",
    "ball_layers",
    "ball_max_spectral_radius",
    "conjugation_reduce",
    "decide_greater",
    "eigenline_separation",
    "eigenvalues",
    "eigenvectors_arith",
    "evaluate",
    "fixed_point",
    "format_set",
    "fs_distance_sq",
    "intersect",
    "inverse_letter",
    "leading_eigenvalue",
    "mat_norm_sq_below",
    "op_norm",
    "parse_element",
    "parse_set",
    "radius_exceeds_norm",
    "rational_str",
    "reduce_word",
    "set_norm",
    "sign_int_sqrt",
    "spectral_radius",
    "sqrt_bounds",
    "symmetrize",
    "unique_fixed_point",
    "wedge",
]
