"""Exact character sums over matrix groups over prime fields, and exhaustive
checks of the equidistribution of matrices and their inverses."""

from .charsum import FreqVector, hyper_kloosterman, k_gl, k_sl, kloosterman, s_freq
from .discrepancy import empirical_box_error, etk_bound, etk_report, exp_sum_over_image, default_H, r_of_h
from .embed import Embedding, UnitPoint, classical_f_n, embed, g_p, h_p, s_p, tilde_g_p
from .errors import (CombinatorialBlowup, ConditionViolated, DeskScaleExceeded, DimensionMismatch,
                     IndexOverflow, MatrixEquidistError, MembershipViolation, ModulusMismatch, NotAUnit,
                     NotPrime, Singular)
from .fp import FpMatrix, Residue, det, entrywise_dot, inverse, is_prime, mat_mul
from .groups import EnumChunk, GroupKind, desk_scale_limit, enumerate_group, order
from .region import Box, RegionUnion, count_image

__version__ = "0.1.0"

__all__ = [
    "Box", "CombinatorialBlowup", "ConditionViolated", "DeskScaleExceeded", "DimensionMismatch",
    "Embedding", "EnumChunk", "FpMatrix", "FreqVector", "GroupKind", "IndexOverflow",
    "MatrixEquidistError", "MembershipViolation", "ModulusMismatch", "NotAUnit", "NotPrime",
    "RegionUnion", "Residue", "Singular", "UnitPoint", "classical_f_n", "count_image", "desk_scale_limit",
    "det", "embed", "empirical_box_error", "entrywise_dot", "enumerate_group", "etk_bound", "etk_report",
    "exp_sum_over_image", "g_p", "h_p", "hyper_kloosterman", "inverse", "is_prime", "k_gl", "k_sl",
    "kloosterman", "mat_mul", "order", "default_H", "r_of_h", "s_freq", "s_p", "tilde_g_p",
]
