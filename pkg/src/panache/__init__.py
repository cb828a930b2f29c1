"""Exact computations with blended extensions of group representations and their self-duality."""

from .autodual import autodualize, build_datum, datum_for, gamma_obstruction, isoaut_find, pairing_extensions
from .blend import (
    BlendedExtension,
    build_MU,
    build_MU_prime,
    canonical_iso,
    induced_m2_automorphism,
    is_isomorphic,
    solve_blend,
    torsor_act,
    torsor_difference,
)
from .ext import Cocycle, ExtClass, baer_sum, class_of, dual_class, ext_space, f_transport, pullback, pushforward
from .linalg import Matrix
from .reps import GroupPresentation, Representation, dual, free_group, hom_space, tensor, trivial

__all__ = [
    "BlendedExtension",
    "Cocycle",
    "ExtClass",
    "GroupPresentation",
    "Matrix",
    "Representation",
    "autodualize",
    "baer_sum",
    "build_MU",
    "build_MU_prime",
    "build_datum",
    "canonical_iso",
    "class_of",
    "datum_for",
    "dual",
    "dual_class",
    "ext_space",
    "f_transport",
    "free_group",
    "gamma_obstruction",
    "hom_space",
    "induced_m2_automorphism",
    "is_isomorphic",
    "isoaut_find",
    "pairing_extensions",
    "pullback",
    "pushforward",
    "solve_blend",
    "tensor",
    "torsor_act",
    "torsor_difference",
    "trivial",
]
